#ifndef KACD_SEMANTICS_HPP_
#define KACD_SEMANTICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kacd/automaton.hpp"
#include "kacd/errors.hpp"
#include "kacd/term.hpp"

namespace kacd {

namespace detail {

inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace detail

/// Serializable description of a variable's language: a finite word set, the
/// alphabet-complement of a finite word set, or a complement-free expression
/// in the term grammar whose identifiers are alphabet symbols.
struct ValueDesc {
    enum class Kind { Words, CoWords, Regex };
    Kind kind = Kind::Words;
    std::vector<Word> words;
    std::string regex;

    static ValueDesc of_words(std::vector<Word> ws) {
        ValueDesc d;
        d.kind = Kind::Words;
        d.words = std::move(ws);
        return d;
    }
    static ValueDesc of_cowords(std::vector<Word> ws) {
        ValueDesc d;
        d.kind = Kind::CoWords;
        d.words = std::move(ws);
        return d;
    }
    static ValueDesc of_regex(std::string expr) {
        ValueDesc d;
        d.kind = Kind::Regex;
        d.regex = std::move(expr);
        return d;
    }
};

/// Compiles a complement-free term whose identifiers are alphabet symbols.
inline Automaton compile_symbol_regex(const TermPtr& t, const Alphabet& alphabet) {
    switch (t->kind) {
        case TermKind::Var:
            return from_words({Word{t->name}}, alphabet);
        case TermKind::One:
            return from_words({Word{}}, alphabet);
        case TermKind::Zero:
            return Automaton::empty(alphabet);
        case TermKind::Plus:
            return union_lang(compile_symbol_regex(t->left, alphabet),
                              compile_symbol_regex(t->right, alphabet));
        case TermKind::Seq:
            return concat(compile_symbol_regex(t->left, alphabet),
                          compile_symbol_regex(t->right, alphabet));
        case TermKind::Star:
            return star(compile_symbol_regex(t->left, alphabet));
        default:
            throw FragmentError("complement is not allowed in valuation expressions");
    }
}

/// A language-model valuation: a finite alphabet plus a map from variables to
/// regular languages over it. Variables absent from the map denote the empty
/// language. Immutable after construction by convention.
class Valuation {
  public:
    struct Entry {
        Automaton automaton;
        std::optional<ValueDesc> desc;
    };

    Valuation() : Valuation(Alphabet(std::vector<std::string>{})) {}
    explicit Valuation(Alphabet a)
        : alphabet_(std::move(a)), empty_(Automaton::empty(alphabet_)) {}

    const Alphabet& alphabet() const { return alphabet_; }

    void assign_words(const std::string& var, std::vector<Word> words) {
        std::sort(words.begin(), words.end(), detail::shortlex_less);
        words.erase(std::unique(words.begin(), words.end()), words.end());
        Entry e{from_words(words, alphabet_), ValueDesc::of_words(words)};
        entries_[var] = std::move(e);
    }

    void assign_cowords(const std::string& var, std::vector<Word> words) {
        std::sort(words.begin(), words.end(), detail::shortlex_less);
        words.erase(std::unique(words.begin(), words.end()), words.end());
        Entry e{complement(from_words(words, alphabet_)), ValueDesc::of_cowords(words)};
        entries_[var] = std::move(e);
    }

    void assign_regex(const std::string& var, const std::string& expr) {
        TermPtr t = parse_term(expr, FragmentClass::KA);
        Entry e{compile_symbol_regex(t, alphabet_), ValueDesc::of_regex(expr)};
        entries_[var] = std::move(e);
    }

    void assign_automaton(const std::string& var, Automaton a,
                          std::optional<ValueDesc> desc = std::nullopt) {
        if (a.alphabet != alphabet_)
            throw AlphabetMismatch("assigned automaton is over a different alphabet");
        entries_[var] = Entry{std::move(a), std::move(desc)};
    }

    bool has(const std::string& var) const { return entries_.count(var) != 0; }

    const Automaton& value(const std::string& var) const {
        auto it = entries_.find(var);
        return it == entries_.end() ? empty_ : it->second.automaton;
    }

    const std::map<std::string, Entry>& entries() const { return entries_; }

  private:
    Alphabet alphabet_;
    Automaton empty_;
    std::map<std::string, Entry> entries_;
};

/// Per-variable booleans "the empty word belongs to v(x)".
using EpsProfile = std::map<std::string, bool>;

inline EpsProfile eps_profile_of(const Valuation& v, const std::set<std::string>& vars) {
    EpsProfile p;
    for (const auto& x : vars) p[x] = membership(v.value(x), Word{});
    return p;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// The homomorphic extension of the valuation; accepts the full fragment.
inline Automaton evaluate(const TermPtr& t, const Valuation& v) {
    switch (t->kind) {
        case TermKind::Var:
            return v.value(t->name);
        case TermKind::CoVar:
            return complement(v.value(t->name));
        case TermKind::One:
            return from_words({Word{}}, v.alphabet());
        case TermKind::Zero:
            return Automaton::empty(v.alphabet());
        case TermKind::CoOne:
            return complement(from_words({Word{}}, v.alphabet()));
        case TermKind::Plus:
            return union_lang(evaluate(t->left, v), evaluate(t->right, v));
        case TermKind::Seq:
            return concat(evaluate(t->left, v), evaluate(t->right, v));
        case TermKind::Star:
            return star(evaluate(t->left, v));
        case TermKind::Compl:
            return complement(evaluate(t->left, v));
    }
    throw Error("unreachable");
}

/// "epsilon belongs to v(t)" computed from the profile alone. Star collapses
/// to true, complemented variables flip the profile bit.
inline bool eps_membership(const TermPtr& t, const EpsProfile& p) {
    switch (t->kind) {
        case TermKind::Var: {
            auto it = p.find(t->name);
            if (it == p.end()) throw MissingVariable(t->name);
            return it->second;
        }
        case TermKind::CoVar: {
            auto it = p.find(t->name);
            if (it == p.end()) throw MissingVariable(t->name);
            return !it->second;
        }
        case TermKind::One:
            return true;
        case TermKind::Zero:
            return false;
        case TermKind::CoOne:
            return false;
        case TermKind::Plus:
            return eps_membership(t->left, p) || eps_membership(t->right, p);
        case TermKind::Seq:
            return eps_membership(t->left, p) && eps_membership(t->right, p);
        case TermKind::Star:
            return true;
        case TermKind::Compl:
            throw FragmentError("eps_membership is defined on the !x/!1 fragment only");
    }
    throw Error("unreachable");
}

namespace detail {

/// Bitset over the spans (i,j), 0 <= i <= j <= n, of a word of length n.
struct SpanSet {
    std::size_t n = 0;
    std::vector<std::uint64_t> bits;

    explicit SpanSet(std::size_t word_len)
        : n(word_len), bits(((word_len + 1) * (word_len + 1) + 63) / 64, 0) {}

    std::size_t slot(std::size_t i, std::size_t j) const { return i * (n + 1) + j; }
    void set(std::size_t i, std::size_t j) { bits[slot(i, j) >> 6] |= 1ull << (slot(i, j) & 63); }
    bool test(std::size_t i, std::size_t j) const {
        return (bits[slot(i, j) >> 6] >> (slot(i, j) & 63)) & 1;
    }
    void or_with(const SpanSet& o) {
        for (std::size_t k = 0; k < bits.size(); ++k) bits[k] |= o.bits[k];
    }
    bool operator==(const SpanSet& o) const { return bits == o.bits; }
};

inline SpanSet span_join(const SpanSet& a, const SpanSet& b) {
    SpanSet r(a.n);
    for (std::size_t i = 0; i <= a.n; ++i)
        for (std::size_t k = i; k <= a.n; ++k)
            if (a.test(i, k))
                for (std::size_t j = k; j <= a.n; ++j)
                    if (b.test(k, j)) r.set(i, j);
    return r;
}

inline SpanSet span_closure(const SpanSet& a) {
    SpanSet r(a.n);
    for (std::size_t i = 0; i <= a.n; ++i) r.set(i, i);
    r.or_with(a);
    for (;;) {
        SpanSet nxt = span_join(r, r);
        nxt.or_with(r);
        if (nxt == r) return r;
        r = nxt;
    }
}

/// Spans of w that belong to the automaton's language, by running it from
/// every start position.
inline SpanSet automaton_spans(const Automaton& a, const Word& w) {
    SpanSet r(w.size());
    for (std::size_t i = 0; i <= w.size(); ++i) {
        std::vector<State> cur = a.initial;
        if (intersects(cur, a.accepting)) r.set(i, i);
        for (std::size_t j = i + 1; j <= w.size(); ++j) {
            cur = step(a, cur, a.alphabet.index_of(w[j - 1]));
            if (cur.empty()) break;
            if (intersects(cur, a.accepting)) r.set(i, j);
        }
    }
    return r;
}

inline SpanSet term_spans(const TermPtr& t, const Word& w, const Valuation& v,
                          std::map<std::string, SpanSet>& var_cache) {
    std::size_t n = w.size();
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::CoVar: {
            auto it = var_cache.find(t->name);
            if (it == var_cache.end())
                it = var_cache.emplace(t->name, automaton_spans(v.value(t->name), w)).first;
            if (t->kind == TermKind::Var) return it->second;
            SpanSet r(n);  // complement within the valid spans, no automata complement
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t j = i; j <= n; ++j)
                    if (!it->second.test(i, j)) r.set(i, j);
            return r;
        }
        case TermKind::One: {
            SpanSet r(n);
            for (std::size_t i = 0; i <= n; ++i) r.set(i, i);
            return r;
        }
        case TermKind::Zero:
            return SpanSet(n);
        case TermKind::CoOne: {
            SpanSet r(n);
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j) r.set(i, j);
            return r;
        }
        case TermKind::Plus: {
            SpanSet r = term_spans(t->left, w, v, var_cache);
            r.or_with(term_spans(t->right, w, v, var_cache));
            return r;
        }
        case TermKind::Seq:
            return span_join(term_spans(t->left, w, v, var_cache),
                             term_spans(t->right, w, v, var_cache));
        case TermKind::Star:
            return span_closure(term_spans(t->left, w, v, var_cache));
        case TermKind::Compl:
            throw FragmentError("membership_dp is defined on the !x/!1 fragment only");
    }
    throw Error("unreachable");
}

}  // namespace detail

/// Dynamic program over the spans of w; agrees with evaluate + membership but
/// never complements an automaton.
inline bool membership_dp(const Word& w, const TermPtr& t, const Valuation& v) {
    for (const auto& sym : w) (void)v.alphabet().index_of(sym);
    std::map<std::string, detail::SpanSet> var_cache;
    return detail::term_spans(t, w, v, var_cache).test(0, w.size());
}

// ---------------------------------------------------------------------------
// Words-to-letters transformation and alphabet restriction
// ---------------------------------------------------------------------------

inline std::vector<std::string> fresh_letters(std::size_t m) {
    std::vector<std::string> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back("l" + std::to_string(i));
    return out;
}

/// Abstracts the factorization w0...w_{m-1} into fresh letters l0...l_{m-1}:
/// each variable receives exactly the contiguous blocks l_i...l_{j-1} whose
/// source concatenation w_i...w_{j-1} lies in its old value.
inline Valuation words_to_letters(const Valuation& v, const std::vector<Word>& words,
                                  bool allow_empty_words = false) {
    for (const Word& w : words) {
        if (w.empty() && !allow_empty_words)
            throw NonEmptyRequired("words-to-letters blocks must be non-empty");
        for (const auto& sym : w)
            if (!v.alphabet().contains(sym))
                throw AlphabetMismatch("block word uses symbol '" + sym + "' outside the alphabet");
    }
    std::size_t m = words.size();
    std::vector<std::string> letters = fresh_letters(m);
    Valuation out{Alphabet(letters)};
    for (const auto& [var, entry] : v.entries()) {
        std::vector<Word> blocks;
        for (std::size_t i = 0; i <= m; ++i) {
            for (std::size_t j = i; j <= m; ++j) {
                Word source;
                for (std::size_t k = i; k < j; ++k)
                    source.insert(source.end(), words[k].begin(), words[k].end());
                if (!membership(entry.automaton, source)) continue;
                Word block(letters.begin() + i, letters.begin() + j);
                blocks.push_back(std::move(block));
            }
        }
        out.assign_words(var, std::move(blocks));
    }
    return out;
}

/// v_B(x) = v(x) with all words using letters outside B removed.
inline Valuation restrict_alphabet(const Valuation& v, const Alphabet& sub) {
    if (!sub.subset_of(v.alphabet()))
        throw NotASubset("restriction alphabet is not a subset of the valuation alphabet");
    Valuation out{sub};
    for (const auto& [var, entry] : v.entries()) {
        std::optional<ValueDesc> desc;
        if (entry.desc && entry.desc->kind != ValueDesc::Kind::Regex) {
            std::vector<Word> kept;
            for (const Word& w : entry.desc->words) {
                bool ok = true;
                for (const auto& sym : w) ok = ok && sub.contains(sym);
                if (ok) kept.push_back(w);
            }
            desc = entry.desc->kind == ValueDesc::Kind::Words ? ValueDesc::of_words(kept)
                                                              : ValueDesc::of_cowords(kept);
        }
        out.assign_automaton(var, restrict_letters(entry.automaton, sub), std::move(desc));
    }
    return out;
}

/// Each mentioned variable maps to its own singleton letter. The reserved
/// sentinel letter stands for all unmentioned variables of the infinite
/// variable supply.
inline const char* kSentinelLetter = "\xE2\x8A\xA5";  // UTF-8 for the bottom sign

inline Valuation standard_valuation(const std::set<std::string>& vars, bool with_sentinel) {
    std::vector<std::string> letters(vars.begin(), vars.end());
    if (with_sentinel) letters.push_back(kSentinelLetter);
    Valuation v{Alphabet(letters)};
    for (const auto& x : vars) v.assign_words(x, {Word{x}});
    return v;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Side { LeftNotInRight };
enum class Direction { LhsLeRhs, RhsLeLhs };

struct Refutation {
    Valuation valuation;
    Word witness;  // in v(lhs) \ v(rhs) for the failing direction
    Side side = Side::LeftNotInRight;
    Direction direction = Direction::LhsLeRhs;
    std::size_t block_count = 0;  // m of the refuting enumeration stage, when meaningful
};

struct Verdict {
    bool holds = true;
    std::optional<Refutation> refutation;

    static Verdict yes() { return Verdict{}; }
    static Verdict no(Refutation r) { return Verdict{false, std::move(r)}; }
};

/// Internal guard: every emitted refutation must replay through evaluate().
inline void verify_refutation(const TermPtr& lhs, const TermPtr& rhs, const Refutation& r) {
    const TermPtr& a = r.direction == Direction::LhsLeRhs ? lhs : rhs;
    const TermPtr& b = r.direction == Direction::LhsLeRhs ? rhs : lhs;
    if (!membership(evaluate(a, r.valuation), r.witness) ||
        membership(evaluate(b, r.valuation), r.witness))
        throw NotActuallyDistinct("refutation failed to re-verify: witness '" +
                                  word_to_string(r.witness) + "'");
}

namespace detail {

inline std::string fresh_var_name(const std::set<std::string>& taken) {
    if (!taken.count("z")) return "z";
    for (std::size_t i = 0;; ++i) {
        std::string c = "z" + std::to_string(i);
        if (!taken.count(c)) return c;
    }
}

/// Renames one alphabet letter everywhere in a valuation (and in words).
inline Valuation rename_letter(const Valuation& v, const std::string& from, const std::string& to) {
    std::vector<std::string> letters = v.alphabet().letters();
    for (auto& l : letters)
        if (l == from) l = to;
    Alphabet renamed(letters);
    Valuation out{renamed};
    for (const auto& [var, entry] : v.entries()) {
        Automaton a = entry.automaton;
        a.alphabet = renamed;  // indices unchanged
        std::optional<ValueDesc> desc = entry.desc;
        if (desc && desc->kind != ValueDesc::Kind::Regex) {
            for (Word& w : desc->words)
                for (auto& sym : w)
                    if (sym == from) sym = to;
        } else if (desc && desc->kind == ValueDesc::Kind::Regex) {
            desc = std::nullopt;  // symbol names are baked into the expression
        }
        out.assign_automaton(var, std::move(a), std::move(desc));
    }
    return out;
}

}  // namespace detail

/// Decides inclusion under the standard valuation, i.e. the classical
/// regular-language semantics where each variable is its own letter and one
/// sentinel letter summarizes all unmentioned variables. Accepts the full
/// fragment; see the README note on full-complement inputs.
inline Verdict std_lang_includes(const TermPtr& lhs, const TermPtr& rhs,
                                 std::size_t extra_sentinels = 0) {
    std::set<std::string> vars = vars_of(lhs);
    collect_vars(rhs, vars);
    std::vector<std::string> sentinels{kSentinelLetter};
    for (std::size_t i = 0; i < extra_sentinels; ++i)
        sentinels.push_back(std::string(kSentinelLetter) + std::to_string(i));
    std::vector<std::string> letters(vars.begin(), vars.end());
    letters.insert(letters.end(), sentinels.begin(), sentinels.end());
    Valuation v{Alphabet(letters)};
    for (const auto& x : vars) v.assign_words(x, {Word{x}});
    auto witness = includes(evaluate(lhs, v), evaluate(rhs, v));
    if (!witness) return Verdict::yes();
    // report with sentinel letters renamed to fresh variable names
    std::set<std::string> taken = vars;
    Valuation reported = v;
    Word w = *witness;
    for (const auto& s : sentinels) {
        std::string fresh = detail::fresh_var_name(taken);
        taken.insert(fresh);
        reported = detail::rename_letter(reported, s, fresh);
        for (auto& sym : w)
            if (sym == s) sym = fresh;
    }
    return Verdict::no(Refutation{std::move(reported), std::move(w)});
}

inline Verdict std_lang_equiv(const TermPtr& lhs, const TermPtr& rhs,
                              std::size_t extra_sentinels = 0) {
    Verdict fwd = std_lang_includes(lhs, rhs, extra_sentinels);
    if (!fwd.holds) return fwd;
    Verdict bwd = std_lang_includes(rhs, lhs, extra_sentinels);
    if (bwd.holds) return Verdict::yes();
    bwd.refutation->direction = Direction::RhsLeLhs;
    return bwd;
}

// ---------------------------------------------------------------------------
// Witness decomposition (constructive counterpart of the split lemma)
// ---------------------------------------------------------------------------

namespace detail {

inline bool ext_letter_accepts(const ExtLetter& l, const Valuation& v, const Word& piece) {
    switch (l.kind) {
        case ExtLetter::Kind::Pos:
            return membership(v.value(l.name), piece);
        case ExtLetter::Kind::Neg:
            return !membership(v.value(l.name), piece);
        case ExtLetter::Kind::NotOne:
            return !piece.empty();
    }
    return false;
}

}  // namespace detail

/// Splits w into |u| consecutive pieces, the k-th lying in the value of u's
/// k-th letter; empty pieces are then dropped, leaving the non-empty block
/// factorization. None when w is not in v(u).
inline std::optional<std::vector<Word>> decompose_witness(const ExtWord& u, const Valuation& v,
                                                          const Word& w) {
    std::size_t n = u.size(), len = w.size();
    // piece_ok[k][p][q]: w[p..q) fits u[k]
    auto piece_ok = [&](std::size_t k, std::size_t p, std::size_t q) {
        Word piece(w.begin() + p, w.begin() + q);
        return detail::ext_letter_accepts(u[k], v, piece);
    };
    std::vector<std::vector<bool>> back(n + 1, std::vector<bool>(len + 1, false));
    back[n][len] = true;
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t p = 0; p <= len; ++p) {
            for (std::size_t q = p; q <= len && !back[k][p]; ++q) {
                if (back[k + 1][q] && piece_ok(k, p, q)) back[k][p] = true;
            }
        }
    }
    if (!back[0][0]) return std::nullopt;
    std::vector<Word> blocks;
    std::size_t p = 0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t q = p; q <= len; ++q) {
            if (back[k + 1][q] && piece_ok(k, p, q)) {
                if (q > p) blocks.emplace_back(w.begin() + p, w.begin() + q);
                p = q;
                break;
            }
        }
    }
    return blocks;
}

// ---------------------------------------------------------------------------
// Valuation file format
// ---------------------------------------------------------------------------

using json = nlohmann::ordered_json;

inline json valuation_to_json(const Valuation& v) {
    json j;
    j["alphabet"] = json::array();
    for (const auto& l : v.alphabet().letters()) j["alphabet"].push_back(l);
    json vars = json::object();
    for (const auto& [name, entry] : v.entries()) {
        json e;
        ValueDesc desc;
        if (entry.desc) {
            desc = *entry.desc;
        } else if (auto words = enumerate_finite(entry.automaton)) {
            desc = ValueDesc::of_words(*words);
        } else if (auto cowords = enumerate_finite(complement(entry.automaton))) {
            desc = ValueDesc::of_cowords(*cowords);
        } else {
            throw FormatError("value of '" + name + "' has no serializable description");
        }
        if (desc.kind == ValueDesc::Kind::Regex) {
            e["kind"] = "regex";
            e["expr"] = desc.regex;
        } else {
            e["kind"] = desc.kind == ValueDesc::Kind::Words ? "words" : "cowords";
            std::vector<Word> items = desc.words;
            std::sort(items.begin(), items.end(), detail::shortlex_less);
            e["items"] = json::array();
            for (const Word& w : items) e["items"].push_back(word_to_string(w));
        }
        vars[name] = std::move(e);
    }
    j["vars"] = std::move(vars);
    return j;
}

inline Valuation valuation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("alphabet") || !j.contains("vars"))
        throw FormatError("valuation must be an object with 'alphabet' and 'vars'");
    std::vector<std::string> letters;
    for (const auto& l : j.at("alphabet")) {
        if (!l.is_string()) throw FormatError("alphabet entries must be strings");
        letters.push_back(l.get<std::string>());
    }
    Valuation v{Alphabet(letters)};
    for (const auto& [name, e] : j.at("vars").items()) {
        if (!e.is_object() || !e.contains("kind")) throw FormatError("malformed value for '" + name + "'");
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "regex") {
            v.assign_regex(name, e.at("expr").get<std::string>());
        } else if (kind == "words" || kind == "cowords") {
            std::vector<Word> items;
            for (const auto& s : e.at("items")) items.push_back(parse_word(v.alphabet(), s.get<std::string>()));
            if (kind == "words")
                v.assign_words(name, std::move(items));
            else
                v.assign_cowords(name, std::move(items));
        } else {
            throw FormatError("unknown value kind '" + kind + "'");
        }
    }
    return v;
}

}  // namespace kacd

#endif  // KACD_SEMANTICS_HPP_
