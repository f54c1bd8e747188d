#ifndef KACD_AUTOMATON_HPP_
#define KACD_AUTOMATON_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kacd/errors.hpp"

namespace kacd {

using State = std::uint32_t;
/// A word is a sequence of alphabet symbols.
using Word = std::vector<std::string>;

/// Finite ordered alphabet of distinct symbol names. Size 0 is legal
/// (then the only word is the empty one).
class Alphabet {
  public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (!index_.emplace(letters_[i], i).second) {
                throw FormatError("duplicate alphabet symbol '" + letters_[i] + "'");
            }
        }
    }

    std::size_t size() const { return letters_.size(); }
    const std::vector<std::string>& letters() const { return letters_; }
    const std::string& letter(std::size_t i) const { return letters_[i]; }

    bool contains(const std::string& s) const { return index_.count(s) != 0; }

    std::size_t index_of(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw UnknownSymbol(s);
        return it->second;
    }

    bool operator==(const Alphabet& other) const { return letters_ == other.letters_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

    /// True iff every letter of this alphabet occurs in `other`.
    bool subset_of(const Alphabet& other) const {
        for (const auto& l : letters_)
            if (!other.contains(l)) return false;
        return true;
    }

  private:
    std::vector<std::string> letters_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Joins symbols without separator; greedy longest-match tokenization on the
/// way back (see `parse_word`).
inline std::string word_to_string(const Word& w) {
    std::string out;
    for (const auto& s : w) out += s;
    return out;
}

/// Tokenizes `text` into alphabet symbols by greedy longest match.
inline Word parse_word(const Alphabet& alphabet, const std::string& text) {
    Word out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = 0;
        for (const auto& l : alphabet.letters()) {
            if (l.size() > best && text.compare(pos, l.size(), l) == 0) best = l.size();
        }
        if (best == 0) throw UnknownSymbol(text.substr(pos, 1));
        out.push_back(text.substr(pos, best));
        pos += best;
    }
    return out;
}

/// Nondeterministic finite automaton over a concrete alphabet. No epsilon
/// transitions; acceptance of the empty word is expressed by an initial state
/// that is also accepting. Immutable by convention after construction.
struct Automaton {
    Alphabet alphabet;
    State num_states = 0;
    /// next[state][letter] = sorted vector of target states.
    std::vector<std::vector<std::vector<State>>> next;
    std::vector<State> initial;    // sorted
    std::vector<State> accepting;  // sorted
    /// Set when the automaton is known to have exactly one initial state and
    /// exactly one transition per (state, letter).
    bool det_complete = false;

    static Automaton empty(const Alphabet& a) {
        Automaton r;
        r.alphabet = a;
        return r;
    }

    void add_states(State n) {
        num_states += n;
        next.resize(num_states, std::vector<std::vector<State>>(alphabet.size()));
    }

    void add_transition(State from, std::size_t letter, State to) {
        auto& v = next[from][letter];
        auto it = std::lower_bound(v.begin(), v.end(), to);
        if (it == v.end() || *it != to) v.insert(it, to);
    }

    bool is_accepting(State s) const {
        return std::binary_search(accepting.begin(), accepting.end(), s);
    }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& row : next)
            for (const auto& t : row) n += t.size();
        return n;
    }
};

namespace detail {

inline void sort_unique(std::vector<State>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline bool intersects(const std::vector<State>& sorted_a, const std::vector<State>& sorted_b) {
    std::size_t i = 0, j = 0;
    while (i < sorted_a.size() && j < sorted_b.size()) {
        if (sorted_a[i] == sorted_b[j]) return true;
        if (sorted_a[i] < sorted_b[j]) ++i; else ++j;
    }
    return false;
}

inline void require_same_alphabet(const Automaton& a, const Automaton& b) {
    if (a.alphabet != b.alphabet)
        throw AlphabetMismatch("operands are over different alphabets");
}

inline std::vector<State> step(const Automaton& a, const std::vector<State>& from, std::size_t letter) {
    std::vector<State> out;
    for (State s : from)
        for (State t : a.next[s][letter]) out.push_back(t);
    sort_unique(out);
    return out;
}

}  // namespace detail

/// Accepts exactly the given finite word set.
inline Automaton from_words(const std::vector<Word>& words, const Alphabet& alphabet) {
    Automaton a = Automaton::empty(alphabet);
    a.add_states(1);
    a.initial = {0};
    // trie insertion
    std::vector<std::map<std::size_t, State>> children(1);
    std::set<State> accept;
    for (const Word& w : words) {
        State cur = 0;
        for (const auto& sym : w) {
            std::size_t li = alphabet.index_of(sym);
            auto it = children[cur].find(li);
            if (it == children[cur].end()) {
                State fresh = a.num_states;
                a.add_states(1);
                children.emplace_back();
                a.add_transition(cur, li, fresh);
                children[cur][li] = fresh;
                cur = fresh;
            } else {
                cur = it->second;
            }
        }
        accept.insert(cur);
    }
    a.accepting.assign(accept.begin(), accept.end());
    return a;
}

inline bool membership(const Automaton& a, const Word& w) {
    std::vector<State> cur = a.initial;
    for (const auto& sym : w) {
        std::size_t li = a.alphabet.index_of(sym);
        cur = detail::step(a, cur, li);
        if (cur.empty()) return false;
    }
    return detail::intersects(cur, a.accepting);
}

inline Automaton union_lang(const Automaton& a, const Automaton& b) {
    detail::require_same_alphabet(a, b);
    Automaton r = Automaton::empty(a.alphabet);
    r.add_states(a.num_states + b.num_states);
    State off = a.num_states;
    for (State s = 0; s < a.num_states; ++s)
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State t : a.next[s][l]) r.add_transition(s, l, t);
    for (State s = 0; s < b.num_states; ++s)
        for (std::size_t l = 0; l < b.alphabet.size(); ++l)
            for (State t : b.next[s][l]) r.add_transition(s + off, l, t + off);
    r.initial = a.initial;
    for (State s : b.initial) r.initial.push_back(s + off);
    r.accepting = a.accepting;
    for (State s : b.accepting) r.accepting.push_back(s + off);
    detail::sort_unique(r.initial);
    detail::sort_unique(r.accepting);
    return r;
}

inline Automaton concat(const Automaton& a, const Automaton& b) {
    detail::require_same_alphabet(a, b);
    Automaton r = Automaton::empty(a.alphabet);
    r.add_states(a.num_states + b.num_states);
    State off = a.num_states;
    for (State s = 0; s < a.num_states; ++s)
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State t : a.next[s][l]) r.add_transition(s, l, t);
    for (State s = 0; s < b.num_states; ++s)
        for (std::size_t l = 0; l < b.alphabet.size(); ++l)
            for (State t : b.next[s][l]) r.add_transition(s + off, l, t + off);
    // accepting states of a inherit the outgoing edges of b's initial states
    for (State f : a.accepting)
        for (State i : b.initial)
            for (std::size_t l = 0; l < b.alphabet.size(); ++l)
                for (State t : b.next[i][l]) r.add_transition(f, l, t + off);
    bool a_eps = detail::intersects(a.initial, a.accepting);
    bool b_eps = detail::intersects(b.initial, b.accepting);
    r.initial = a.initial;
    if (a_eps)
        for (State i : b.initial) r.initial.push_back(i + off);
    for (State f : b.accepting) r.accepting.push_back(f + off);
    if (b_eps)
        for (State f : a.accepting) r.accepting.push_back(f);
    detail::sort_unique(r.initial);
    detail::sort_unique(r.accepting);
    return r;
}

inline Automaton star(const Automaton& a) {
    Automaton r = Automaton::empty(a.alphabet);
    r.add_states(a.num_states + 1);
    State fresh = a.num_states;
    for (State s = 0; s < a.num_states; ++s)
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State t : a.next[s][l]) r.add_transition(s, l, t);
    // fresh initial-accepting state and every accepting state copy the
    // out-edges of the original initial states
    for (State i : a.initial) {
        for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
            for (State t : a.next[i][l]) {
                r.add_transition(fresh, l, t);
                for (State f : a.accepting) r.add_transition(f, l, t);
            }
        }
    }
    r.initial = {fresh};
    r.accepting = a.accepting;
    r.accepting.push_back(fresh);
    detail::sort_unique(r.accepting);
    return r;
}

/// Subset construction; the result is deterministic and complete (the empty
/// subset acts as the trap state).
inline Automaton determinize(const Automaton& a) {
    Automaton r = Automaton::empty(a.alphabet);
    std::map<std::vector<State>, State> ids;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](const std::vector<State>& subset) {
        auto it = ids.find(subset);
        if (it != ids.end()) return it->second;
        State fresh = r.num_states;
        r.add_states(1);
        ids.emplace(subset, fresh);
        subsets.push_back(subset);
        if (detail::intersects(subset, a.accepting)) r.accepting.push_back(fresh);
        return fresh;
    };
    State start = intern(a.initial);
    r.initial = {start};
    for (State s = 0; s < r.num_states; ++s) {
        std::vector<State> subset = subsets[s];
        for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
            State t = intern(detail::step(a, subset, l));
            r.add_transition(s, l, t);
        }
    }
    detail::sort_unique(r.accepting);
    r.det_complete = true;
    return r;
}

/// Complement relative to X* for the automaton's own alphabet.
inline Automaton complement(const Automaton& a) {
    Automaton d = determinize(a);
    std::vector<State> acc;
    for (State s = 0; s < d.num_states; ++s)
        if (!d.is_accepting(s)) acc.push_back(s);
    d.accepting = std::move(acc);
    return d;
}

inline Automaton intersect(const Automaton& a, const Automaton& b) {
    detail::require_same_alphabet(a, b);
    Automaton r = Automaton::empty(a.alphabet);
    std::map<std::pair<State, State>, State> ids;
    std::vector<std::pair<State, State>> pairs;
    auto intern = [&](State x, State y) {
        auto it = ids.find({x, y});
        if (it != ids.end()) return it->second;
        State fresh = r.num_states;
        r.add_states(1);
        ids.emplace(std::make_pair(x, y), fresh);
        pairs.emplace_back(x, y);
        if (a.is_accepting(x) && b.is_accepting(y)) r.accepting.push_back(fresh);
        return fresh;
    };
    for (State x : a.initial)
        for (State y : b.initial) r.initial.push_back(intern(x, y));
    for (State s = 0; s < r.num_states; ++s) {
        auto [x, y] = pairs[s];
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State tx : a.next[x][l])
                for (State ty : b.next[y][l]) r.add_transition(s, l, intern(tx, ty));
    }
    detail::sort_unique(r.initial);
    detail::sort_unique(r.accepting);
    return r;
}

/// Keeps only states that are both reachable from an initial state and able
/// to reach an accepting state.
inline Automaton trim(const Automaton& a) {
    std::vector<bool> fwd(a.num_states, false), bwd(a.num_states, false);
    std::queue<State> q;
    for (State s : a.initial) {
        fwd[s] = true;
        q.push(s);
    }
    while (!q.empty()) {
        State s = q.front();
        q.pop();
        for (const auto& ts : a.next[s])
            for (State t : ts)
                if (!fwd[t]) {
                    fwd[t] = true;
                    q.push(t);
                }
    }
    std::vector<std::vector<State>> preds(a.num_states);
    for (State s = 0; s < a.num_states; ++s)
        for (const auto& ts : a.next[s])
            for (State t : ts) preds[t].push_back(s);
    for (State s : a.accepting) {
        bwd[s] = true;
        q.push(s);
    }
    while (!q.empty()) {
        State s = q.front();
        q.pop();
        for (State p : preds[s])
            if (!bwd[p]) {
                bwd[p] = true;
                q.push(p);
            }
    }
    std::vector<State> remap(a.num_states, 0);
    Automaton r = Automaton::empty(a.alphabet);
    for (State s = 0; s < a.num_states; ++s) {
        if (fwd[s] && bwd[s]) {
            remap[s] = r.num_states;
            r.add_states(1);
        }
    }
    for (State s = 0; s < a.num_states; ++s) {
        if (!(fwd[s] && bwd[s])) continue;
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State t : a.next[s][l])
                if (fwd[t] && bwd[t]) r.add_transition(remap[s], l, remap[t]);
    }
    for (State s : a.initial)
        if (fwd[s] && bwd[s]) r.initial.push_back(remap[s]);
    for (State s : a.accepting)
        if (fwd[s] && bwd[s]) r.accepting.push_back(remap[s]);
    detail::sort_unique(r.initial);
    detail::sort_unique(r.accepting);
    return r;
}

inline bool is_empty(const Automaton& a) {
    return trim(a).num_states == 0;
}

namespace detail {

/// BFS over pairs of state subsets. Letters are explored in alphabet order,
/// so the first hit is the length-lexicographically least witness.
template <typename AcceptPred>
inline std::optional<Word> product_search(const Automaton& a, const Automaton& b, AcceptPred bad) {
    using Node = std::pair<std::vector<State>, std::vector<State>>;
    std::map<Node, std::size_t> seen;
    std::vector<Node> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> parent;  // (parent index, letter)
    auto reconstruct = [&](std::size_t idx) {
        Word w;
        while (idx != 0) {
            w.push_back(a.alphabet.letter(parent[idx].second));
            idx = parent[idx].first;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };
    Node start{a.initial, b.initial};
    seen.emplace(start, 0);
    nodes.push_back(start);
    parent.emplace_back(0, 0);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        const Node cur = nodes[head];
        bool acc_a = intersects(cur.first, a.accepting);
        bool acc_b = intersects(cur.second, b.accepting);
        if (bad(acc_a, acc_b)) return reconstruct(head);
        for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
            Node nxt{step(a, cur.first, l), step(b, cur.second, l)};
            auto [it, fresh] = seen.emplace(nxt, nodes.size());
            if (fresh) {
                nodes.push_back(nxt);
                parent.emplace_back(head, l);
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// None iff L(a) is a subset of L(b); otherwise a shortest word in
/// L(a) \ L(b), ties broken lexicographically by alphabet order.
inline std::optional<Word> includes(const Automaton& a, const Automaton& b) {
    detail::require_same_alphabet(a, b);
    return detail::product_search(a, b, [](bool in_a, bool in_b) { return in_a && !in_b; });
}

/// None iff L(a) = L(b); otherwise a shortest word in the symmetric difference.
inline std::optional<Word> equivalent(const Automaton& a, const Automaton& b) {
    detail::require_same_alphabet(a, b);
    return detail::product_search(a, b, [](bool in_a, bool in_b) { return in_a != in_b; });
}

inline std::optional<Word> shortest_accepted(const Automaton& a) {
    Automaton none = Automaton::empty(a.alphabet);
    return detail::product_search(a, none, [](bool in_a, bool) { return in_a; });
}

/// Language intersected with B*, returned over the sub-alphabet B: drops all
/// transitions labelled outside B and reindexes the letters.
inline Automaton restrict_letters(const Automaton& a, const Alphabet& sub) {
    if (!sub.subset_of(a.alphabet))
        throw NotASubset("target alphabet is not a subset of the automaton's alphabet");
    Automaton r = Automaton::empty(sub);
    r.add_states(a.num_states);
    for (State s = 0; s < a.num_states; ++s) {
        for (std::size_t l = 0; l < sub.size(); ++l) {
            std::size_t src = a.alphabet.index_of(sub.letter(l));
            for (State t : a.next[s][src]) r.add_transition(s, l, t);
        }
    }
    r.initial = a.initial;
    r.accepting = a.accepting;
    return r;
}

/// Same language read over a larger alphabet (every used letter must exist in
/// the target).
inline Automaton embed_alphabet(const Automaton& a, const Alphabet& big) {
    if (!a.alphabet.subset_of(big))
        throw NotASubset("automaton uses letters missing from the target alphabet");
    Automaton r = Automaton::empty(big);
    r.add_states(a.num_states);
    for (State s = 0; s < a.num_states; ++s)
        for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
            std::size_t dst = big.index_of(a.alphabet.letter(l));
            for (State t : a.next[s][l]) r.add_transition(s, dst, t);
        }
    r.initial = a.initial;
    r.accepting = a.accepting;
    r.det_complete = false;
    return r;
}

/// Homomorphic image: every letter is replaced by a word over the target
/// alphabet. Image words may be empty only if the automaton stays epsilon-free
/// afterwards, so empty images are rejected.
inline Automaton substitute(const Automaton& a, const Alphabet& target,
                            const std::vector<Word>& image) {
    if (image.size() != a.alphabet.size())
        throw FormatError("substitution must cover the whole alphabet");
    for (const Word& w : image)
        if (w.empty()) throw FormatError("empty substitution image is not supported");
    Automaton r = Automaton::empty(target);
    r.add_states(a.num_states);
    for (State s = 0; s < a.num_states; ++s) {
        for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
            const Word& w = image[l];
            for (State t : a.next[s][l]) {
                State cur = s;
                for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                    State mid = r.num_states;
                    r.add_states(1);
                    r.add_transition(cur, target.index_of(w[k]), mid);
                    cur = mid;
                }
                r.add_transition(cur, target.index_of(w.back()), t);
            }
        }
    }
    r.initial = a.initial;
    r.accepting = a.accepting;
    return r;
}

/// Minimal complete DFA with canonical state numbering (BFS order from the
/// initial state, letters in alphabet order). Two automata have the same
/// language iff their minimized forms are structurally identical.
inline Automaton minimize(const Automaton& a) {
    Automaton d = a.det_complete ? a : determinize(a);
    // Moore partition refinement
    std::vector<std::size_t> cls(d.num_states, 0);
    for (State s = 0; s < d.num_states; ++s) cls[s] = d.is_accepting(s) ? 1 : 0;
    std::size_t count = (d.accepting.empty() || d.accepting.size() == d.num_states) ? 1 : 2;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sig_ids;
        std::vector<std::size_t> fresh(d.num_states);
        for (State s = 0; s < d.num_states; ++s) {
            std::vector<std::size_t> sig;
            sig.reserve(d.alphabet.size() + 1);
            sig.push_back(cls[s]);
            for (std::size_t l = 0; l < d.alphabet.size(); ++l)
                sig.push_back(cls[d.next[s][l][0]]);
            auto [it, ins] = sig_ids.emplace(std::move(sig), sig_ids.size());
            (void)ins;
            fresh[s] = it->second;
        }
        bool stable = sig_ids.size() == count;
        count = sig_ids.size();
        cls = fresh;  // the signature refines the old partition
        if (stable) break;
    }
    // canonical BFS renumbering of the classes
    std::size_t start_cls = cls[d.initial[0]];
    std::map<std::size_t, State> renum;
    renum.emplace(start_cls, 0);
    std::vector<State> rep_state(count, 0);
    {
        std::vector<bool> seen(count, false);
        for (State s = 0; s < d.num_states; ++s)
            if (!seen[cls[s]]) {
                seen[cls[s]] = true;
                rep_state[cls[s]] = s;
            }
    }
    std::vector<std::size_t> bfs{start_cls};
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        State s = rep_state[bfs[head]];
        for (std::size_t l = 0; l < d.alphabet.size(); ++l) {
            std::size_t t = cls[d.next[s][l][0]];
            if (renum.emplace(t, static_cast<State>(renum.size())).second) bfs.push_back(t);
        }
    }
    Automaton r = Automaton::empty(d.alphabet);
    r.add_states(static_cast<State>(renum.size()));
    for (std::size_t c : bfs) {
        State s = rep_state[c];
        State rs = renum[c];
        for (std::size_t l = 0; l < d.alphabet.size(); ++l)
            r.add_transition(rs, l, renum[cls[d.next[s][l][0]]]);
        if (d.is_accepting(s)) r.accepting.push_back(rs);
    }
    r.initial = {0};
    detail::sort_unique(r.accepting);
    r.det_complete = true;
    return r;
}

/// All accepted words when the language is finite; None otherwise.
inline std::optional<std::vector<Word>> enumerate_finite(const Automaton& a) {
    Automaton t = trim(a);
    // cycle check on the trimmed automaton
    std::vector<int> color(t.num_states, 0);
    std::vector<std::pair<State, std::size_t>> stack;
    auto flat_succ = [&](State s) {
        std::vector<State> out;
        for (const auto& ts : t.next[s]) out.insert(out.end(), ts.begin(), ts.end());
        return out;
    };
    for (State root = 0; root < t.num_states; ++root) {
        if (color[root] != 0) continue;
        stack.push_back({root, 0});
        color[root] = 1;
        std::vector<std::vector<State>> succs{flat_succ(root)};
        while (!stack.empty()) {
            auto& [s, idx] = stack.back();
            if (idx < succs.back().size()) {
                State nxt = succs.back()[idx++];
                if (color[nxt] == 1) return std::nullopt;  // back edge
                if (color[nxt] == 0) {
                    color[nxt] = 1;
                    stack.push_back({nxt, 0});
                    succs.push_back(flat_succ(nxt));
                }
            } else {
                color[s] = 2;
                stack.pop_back();
                succs.pop_back();
            }
        }
    }
    std::vector<Word> out;
    std::vector<std::pair<std::vector<State>, Word>> frontier{{t.initial, {}}};
    // acyclic: plain search terminates
    while (!frontier.empty()) {
        auto [subset, word] = frontier.back();
        frontier.pop_back();
        if (detail::intersects(subset, t.accepting)) out.push_back(word);
        for (std::size_t l = 0; l < t.alphabet.size(); ++l) {
            auto nxt = detail::step(t, subset, l);
            if (!nxt.empty()) {
                Word w = word;
                w.push_back(t.alphabet.letter(l));
                frontier.emplace_back(std::move(nxt), std::move(w));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Word& x, const Word& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// GraphViz text for debugging; not a stability contract.
inline std::string to_dot(const Automaton& a) {
    std::ostringstream os;
    os << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (State s : a.accepting) os << "  " << s << " [shape=doublecircle];\n";
    for (State s : a.initial) {
        os << "  init" << s << " [shape=point];\n";
        os << "  init" << s << " -> " << s << ";\n";
    }
    for (State s = 0; s < a.num_states; ++s)
        for (std::size_t l = 0; l < a.alphabet.size(); ++l)
            for (State t : a.next[s][l])
                os << "  " << s << " -> " << t << " [label=\"" << a.alphabet.letter(l) << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace kacd

#endif  // KACD_AUTOMATON_HPP_
