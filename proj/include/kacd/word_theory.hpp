#ifndef KACD_WORD_THEORY_HPP_
#define KACD_WORD_THEORY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "kacd/decide.hpp"
#include "kacd/semantics.hpp"
#include "kacd/term.hpp"

namespace kacd {

/// Model classes for the word deciders: alphabets of size 0, size <= 1, and
/// size <= alpha for any alpha >= 2 (their equational theories on extended
/// words stabilize at 2).
enum class WordTheoryLevel { L0, L1, L2 };

enum class WordJustification { SyntacticEqual, OccRule, ParikhRule, SwapRule };

inline const char* justification_name(WordJustification j) {
    switch (j) {
        case WordJustification::SyntacticEqual: return "syntactic";
        case WordJustification::OccRule: return "occ";
        case WordJustification::ParikhRule: return "parikh";
        case WordJustification::SwapRule: return "swap";
    }
    return "?";
}

enum class WitnessSide { Left, Right };

struct WordRefutation {
    Valuation valuation;
    Word witness;  // in the value of the `side` word and not the other
    WitnessSide side = WitnessSide::Left;
};

struct WordVerdict {
    bool equal = true;
    WordJustification justification = WordJustification::SyntacticEqual;
    std::vector<std::size_t> swap_segments;  // segment indices rewritten by the swap
    std::optional<WordRefutation> refutation;
};

/// Split of an extended word at its !1 occurrences. Reassembling
/// prefix ++ !1 ++ seg0 ++ !1 ++ ... ++ !1 ++ suffix restores the input.
struct BlockDecomposition {
    ExtWord prefix;
    std::vector<ExtWord> segments;
    ExtWord suffix;
    std::size_t notone_count = 0;
};

inline BlockDecomposition decompose_blocks(const ExtWord& u) {
    BlockDecomposition d;
    std::vector<std::size_t> marks;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i].kind == ExtLetter::Kind::NotOne) marks.push_back(i);
    d.notone_count = marks.size();
    if (marks.empty()) {
        d.prefix = u;
        return d;
    }
    d.prefix.assign(u.begin(), u.begin() + marks.front());
    for (std::size_t k = 0; k + 1 < marks.size(); ++k)
        d.segments.emplace_back(u.begin() + marks[k] + 1, u.begin() + marks[k + 1]);
    d.suffix.assign(u.begin() + marks.back() + 1, u.end());
    return d;
}

namespace detail {

inline bool is_absorbing(const ExtWord& u) {
    std::set<ExtLetter> o = occ(u);
    for (const auto& l : o) {
        if (l.kind == ExtLetter::Kind::NotOne) return true;
        if (l.kind == ExtLetter::Kind::Pos && o.count(ExtLetter::neg(l.name))) return true;
    }
    return false;
}

inline std::set<std::string> word_vars(const ExtWord& u) {
    std::set<std::string> out;
    for (const auto& l : u)
        if (l.kind != ExtLetter::Kind::NotOne) out.insert(l.name);
    return out;
}

inline std::size_t letter_count(const ExtWord& u, const ExtLetter& l) {
    std::size_t n = 0;
    for (const auto& x : u)
        if (x == l) ++n;
    return n;
}

inline void verify_word_refutation(const ExtWord& u, const ExtWord& w, const WordRefutation& r) {
    const ExtWord& a = r.side == WitnessSide::Left ? u : w;
    const ExtWord& b = r.side == WitnessSide::Left ? w : u;
    if (!membership(evaluate(ext_word_to_term(a), r.valuation), r.witness) ||
        membership(evaluate(ext_word_to_term(b), r.valuation), r.witness))
        throw NotActuallyDistinct("word refutation failed to re-verify");
}

// --- level-0 construction: an epsilon-profile separating the two words ----

inline WordRefutation refute_l0(const ExtWord& u, const ExtWord& w) {
    std::set<std::string> vars = word_vars(u);
    for (const auto& v : word_vars(w)) vars.insert(v);
    auto satisfy = [&](const ExtWord& word) {
        EpsProfile p;
        for (const auto& v : vars) p[v] = false;
        for (const auto& l : word)
            if (l.kind == ExtLetter::Kind::Pos) p[l.name] = true;
        return p;
    };
    EpsProfile p;
    WitnessSide side;
    bool au = is_absorbing(u), aw = is_absorbing(w);
    if (au && !aw) {
        p = satisfy(w);
        side = WitnessSide::Right;
    } else if (aw && !au) {
        p = satisfy(u);
        side = WitnessSide::Left;
    } else {
        // both non-absorbing with different occurrence sets: satisfy one word
        // and falsify a letter only the other contains
        std::set<ExtLetter> ou = occ(u), ow = occ(w);
        std::optional<ExtLetter> only_u, only_w;
        for (const auto& l : ou)
            if (!ow.count(l) && !only_u) only_u = l;
        for (const auto& l : ow)
            if (!ou.count(l) && !only_w) only_w = l;
        ExtLetter zeta = only_u ? *only_u : *only_w;
        side = only_u ? WitnessSide::Right : WitnessSide::Left;
        p = satisfy(side == WitnessSide::Right ? w : u);
        p[zeta.name] = zeta.kind == ExtLetter::Kind::Neg;  // falsify zeta
    }
    Valuation v{Alphabet(std::vector<std::string>{})};
    for (const auto& [name, val] : p)
        v.assign_words(name, val ? std::vector<Word>{Word{}} : std::vector<Word>{});
    WordRefutation r{std::move(v), Word{}, side};
    verify_word_refutation(u, w, r);
    return r;
}

// --- level-1 construction: the one-letter length-gap valuation ------------

inline std::string a_power_regex(std::size_t m) {
    // a^m a*
    std::string out;
    for (std::size_t i = 0; i < m; ++i) out += "a ; ";
    out += "a*";
    return out;
}

inline WordRefutation refute_l1(const ExtWord& u, const ExtWord& w) {
    std::vector<std::string> vars;
    {
        std::set<std::string> s = word_vars(u);
        for (const auto& v : word_vars(w)) s.insert(v);
        vars.assign(s.begin(), s.end());
    }
    std::optional<ExtLetter> dist;
    for (const auto& z : vars) {
        if (letter_count(u, ExtLetter::pos(z)) != letter_count(w, ExtLetter::pos(z))) {
            dist = ExtLetter::pos(z);
            break;
        }
        if (letter_count(u, ExtLetter::neg(z)) != letter_count(w, ExtLetter::neg(z))) {
            dist = ExtLetter::neg(z);
            break;
        }
    }
    Alphabet alphabet(std::vector<std::string>{"a"});
    Valuation v{alphabet};
    std::size_t min_u = 0, min_w = 0;
    if (dist) {
        const std::string& z = dist->name;
        // letters whose value will have minimal length 1: other variables
        // (positively) and !1
        auto rest = [&](const ExtWord& word) {
            std::size_t n = 0;
            for (const auto& l : word) {
                if (l.kind == ExtLetter::Kind::NotOne) ++n;
                if (l.kind == ExtLetter::Kind::Pos && l.name != z) ++n;
            }
            return n;
        };
        std::size_t cu = letter_count(u, *dist), cw = letter_count(w, *dist);
        const ExtWord& small = cu < cw ? u : w;
        std::size_t m = 1 + rest(small);
        if (dist->kind == ExtLetter::Kind::Pos) {
            v.assign_regex(z, a_power_regex(m));  // {a^n | n >= m}
        } else {
            std::vector<Word> below;  // complement value {a^n | n < m}
            for (std::size_t i = 0; i < m; ++i) below.emplace_back(i, std::string("a"));
            v.assign_words(z, below);
        }
        for (const auto& y : vars)
            if (y != z) v.assign_regex(y, a_power_regex(1));  // a+
        std::size_t coeff_u = letter_count(u, *dist), coeff_w = letter_count(w, *dist);
        min_u = m * coeff_u + rest(u);
        min_w = m * coeff_w + rest(w);
    } else {
        // all variable letters agree, so the !1 counts differ
        for (const auto& y : vars) v.assign_regex(y, a_power_regex(1));
        auto min_len = [&](const ExtWord& word) {
            std::size_t n = 0;
            for (const auto& l : word)
                if (l.kind != ExtLetter::Kind::Neg) ++n;  // Pos and !1 cost one 'a'
            return n;
        };
        min_u = min_len(u);
        min_w = min_len(w);
    }
    WitnessSide side = min_u < min_w ? WitnessSide::Left : WitnessSide::Right;
    Word witness(std::min(min_u, min_w), std::string("a"));
    WordRefutation r{std::move(v), std::move(witness), side};
    verify_word_refutation(u, w, r);
    return r;
}

// --- level-2 constructions -------------------------------------------------

/// Sign assignment: flipped[k] means variable k's roles of z / !z are
/// exchanged when matching the proofs' "by flipping the sign" steps.
struct SignView {
    const std::vector<std::string>& vars;
    std::uint64_t flipped;

    bool is_flipped(const std::string& name) const {
        for (std::size_t k = 0; k < vars.size(); ++k)
            if (vars[k] == name) return (flipped >> k) & 1;
        return false;
    }
    bool positive(const ExtLetter& l) const {
        if (l.kind == ExtLetter::Kind::NotOne) return false;
        return (l.kind == ExtLetter::Kind::Pos) != is_flipped(l.name);
    }
};

inline std::vector<ExtLetter> negative_sequence(const ExtWord& u, const SignView& sv) {
    std::vector<ExtLetter> out;
    for (const auto& l : u)
        if (!sv.positive(l)) out.push_back(l);
    return out;
}

/// Emptiness of the maximal negative gaps around the positive occurrences
/// (before the first, between consecutive, after the last).
inline std::vector<bool> gap_emptiness(const ExtWord& u, const SignView& sv) {
    std::vector<bool> out;
    std::size_t gap = 0;
    for (const auto& l : u) {
        if (sv.positive(l)) {
            out.push_back(gap == 0);
            gap = 0;
        } else {
            ++gap;
        }
    }
    out.push_back(gap == 0);
    return out;
}

/// Lemma-style valuation separating words whose i-th negative letters differ:
/// the excluded variable maps to {eps, a}, everything else to {eps, b}.
inline std::optional<WordRefutation> try_negative_mismatch(const ExtWord& u, const ExtWord& w,
                                                           const std::vector<std::string>& vars,
                                                           std::uint64_t sigma) {
    SignView sv{vars, sigma};
    std::vector<ExtLetter> nu = negative_sequence(u, sv), nw = negative_sequence(w, sv);
    if (nu.size() != nw.size()) return std::nullopt;
    std::size_t i = nu.size();
    for (std::size_t k = 0; k < nu.size(); ++k)
        if (nu[k] != nw[k]) {
            i = k;
            break;
        }
    if (i == nu.size()) return std::nullopt;
    std::string y;
    WitnessSide side;
    if (nw[i].kind != ExtLetter::Kind::NotOne) {
        y = nw[i].name;  // witness avoids w: its i-th negative cannot read 'a'
        side = WitnessSide::Left;
    } else {
        y = nu[i].name;
        side = WitnessSide::Right;
    }
    Alphabet alphabet(std::vector<std::string>{"a", "b"});
    Valuation v{alphabet};
    std::set<std::string> all(vars.begin(), vars.end());
    for (const auto& z : all) {
        std::vector<Word> base{Word{}, Word{z == y ? "a" : "b"}};
        if (sv.is_flipped(z))
            v.assign_cowords(z, base);
        else
            v.assign_words(z, base);
    }
    const ExtWord& src = side == WitnessSide::Left ? u : w;
    Word witness;
    std::size_t j = 0;
    for (const auto& l : src) {
        if (sv.positive(l)) continue;  // positives read the empty word
        if (j == i)
            witness.push_back("a");
        else if (l.kind != ExtLetter::Kind::NotOne && l.name == y)
            witness.push_back("b");
        else
            witness.push_back("a");
        ++j;
    }
    WordRefutation r{std::move(v), std::move(witness), side};
    verify_word_refutation(u, w, r);
    return r;
}

/// Lemma-style valuation separating words whose positive-adjacency structure
/// differs: every variable maps to the words that start and end with 'a'.
inline std::optional<WordRefutation> try_adjacency_mismatch(const ExtWord& u, const ExtWord& w,
                                                            const std::vector<std::string>& vars,
                                                            std::uint64_t sigma) {
    SignView sv{vars, sigma};
    std::vector<bool> gu = gap_emptiness(u, sv), gw = gap_emptiness(w, sv);
    if (gu.size() != gw.size()) return std::nullopt;
    std::size_t g = gu.size();
    for (std::size_t k = 0; k < gu.size(); ++k)
        if (gu[k] != gw[k]) {
            g = k;
            break;
        }
    if (g == gu.size()) return std::nullopt;
    // the side whose gap is non-empty carries the witness
    WitnessSide side = !gu[g] ? WitnessSide::Left : WitnessSide::Right;
    Alphabet alphabet(std::vector<std::string>{"a", "b"});
    Valuation v{alphabet};
    std::set<std::string> all(vars.begin(), vars.end());
    for (const auto& z : all) {
        if (sv.is_flipped(z))
            v.assign_regex(z, "1 + b ; (a + b)* + (a + b)* ; b");  // not(starts and ends with a)
        else
            v.assign_regex(z, "a + a ; (a + b)* ; a");  // starts and ends with 'a'
    }
    const ExtWord& src = side == WitnessSide::Left ? u : w;
    Word witness;
    for (const auto& l : src) witness.push_back(sv.positive(l) ? "a" : "b");
    WordRefutation r{std::move(v), std::move(witness), side};
    verify_word_refutation(u, w, r);
    return r;
}

inline WordRefutation refute_l2(const ExtWord& u, const ExtWord& w) {
    // a count mismatch already has a one-letter refutation, valid here too
    {
        std::set<ExtLetter> letters = occ(u);
        for (const auto& l : occ(w)) letters.insert(l);
        for (const auto& l : letters)
            if (letter_count(u, l) != letter_count(w, l)) return refute_l1(u, w);
    }
    std::vector<std::string> vars;
    {
        std::set<std::string> s = word_vars(u);
        for (const auto& v : word_vars(w)) s.insert(v);
        vars.assign(s.begin(), s.end());
    }
    std::uint64_t sigma_count =
        vars.size() <= 12 ? (std::uint64_t{1} << vars.size()) : std::uint64_t{1} + vars.size();
    auto sigma_of = [&](std::uint64_t i) -> std::uint64_t {
        if (vars.size() <= 12) return i;
        return i == 0 ? 0 : (std::uint64_t{1} << (i - 1));  // plain, then single flips
    };
    for (std::uint64_t i = 0; i < sigma_count; ++i)
        if (auto r = try_negative_mismatch(u, w, vars, sigma_of(i))) return std::move(*r);
    for (std::uint64_t i = 0; i < sigma_count; ++i)
        if (auto r = try_adjacency_mismatch(u, w, vars, sigma_of(i))) return std::move(*r);
    // last resort: bounded brute-force search over two letters
    OracleBudget budget;
    budget.max_alphabet = 2;
    budget.max_value_len = 2;
    budget.max_values_per_var = 2;
    if (auto ce = oracle_refute(ext_word_to_term(u), ext_word_to_term(w), budget)) {
        WordRefutation r{std::move(ce->valuation), std::move(ce->witness), WitnessSide::Left};
        verify_word_refutation(u, w, r);
        return r;
    }
    if (auto ce = oracle_refute(ext_word_to_term(w), ext_word_to_term(u), budget)) {
        WordRefutation r{std::move(ce->valuation), std::move(ce->witness), WitnessSide::Right};
        verify_word_refutation(u, w, r);
        return r;
    }
    throw NotActuallyDistinct("no separating valuation found for the word pair");
}

}  // namespace detail

/// Explicit separating valuation for a pair the corresponding decider judged
/// not equal; the witness is semantically verified before returning.
inline WordRefutation refuting_valuation(const ExtWord& u, const ExtWord& w, WordTheoryLevel level) {
    switch (level) {
        case WordTheoryLevel::L0: return detail::refute_l0(u, w);
        case WordTheoryLevel::L1: return detail::refute_l1(u, w);
        case WordTheoryLevel::L2: return detail::refute_l2(u, w);
    }
    throw Error("unreachable");
}

/// Equality of extended words over alphabet-free models: occurrence sets
/// decide, with all absorbing words collapsing to the empty language.
inline WordVerdict decide_e0(const ExtWord& u, const ExtWord& w) {
    WordVerdict out;
    if (u == w) return out;
    bool eq = occ(u) == occ(w) || (detail::is_absorbing(u) && detail::is_absorbing(w));
    if (eq) {
        out.justification = WordJustification::OccRule;
        return out;
    }
    out.equal = false;
    out.refutation = refuting_valuation(u, w, WordTheoryLevel::L0);
    return out;
}

/// Equality over one-letter models: the extended-letter counts decide.
inline WordVerdict decide_e1(const ExtWord& u, const ExtWord& w) {
    WordVerdict out;
    if (u == w) return out;
    std::set<ExtLetter> letters = occ(u);
    for (const auto& l : occ(w)) letters.insert(l);
    bool eq = true;
    for (const auto& l : letters)
        eq = eq && detail::letter_count(u, l) == detail::letter_count(w, l);
    if (eq) {
        out.justification = WordJustification::ParikhRule;
        return out;
    }
    out.equal = false;
    out.refutation = refuting_valuation(u, w, WordTheoryLevel::L1);
    return out;
}

namespace detail {

/// The two-member equivalence class of a !1-delimited segment: when the
/// segment fully alternates (2k maximal runs over one variable's two signs),
/// swapping each run pair gives the only other member.
inline std::optional<ExtWord> segment_swap(const ExtWord& seg) {
    if (seg.empty()) return std::nullopt;
    std::string var;
    for (const auto& l : seg) {
        if (l.kind == ExtLetter::Kind::NotOne) return std::nullopt;  // cannot occur in segments
        if (var.empty()) var = l.name;
        if (l.name != var) return std::nullopt;
    }
    std::vector<std::pair<ExtLetter, std::size_t>> runs;
    for (const auto& l : seg) {
        if (!runs.empty() && runs.back().first == l)
            ++runs.back().second;
        else
            runs.emplace_back(l, 1);
    }
    if (runs.size() < 2 || runs.size() % 2 != 0) return std::nullopt;
    ExtWord swapped;
    for (std::size_t k = 0; k + 1 < runs.size(); k += 2) {
        for (std::size_t c = 0; c < runs[k + 1].second; ++c) swapped.push_back(runs[k + 1].first);
        for (std::size_t c = 0; c < runs[k].second; ++c) swapped.push_back(runs[k].first);
    }
    return swapped;
}

}  // namespace detail

/// Equality over models with at least two letters: segments between
/// consecutive !1 occurrences decide independently, each equal either
/// syntactically or through the run swap; without !1 only identical words
/// are equal.
inline WordVerdict decide_e2(const ExtWord& u, const ExtWord& w) {
    WordVerdict out;
    if (u == w) return out;
    BlockDecomposition du = decompose_blocks(u), dw = decompose_blocks(w);
    bool eq = du.notone_count == dw.notone_count && du.prefix == dw.prefix && du.suffix == dw.suffix;
    std::vector<std::size_t> swaps;
    if (eq) {
        for (std::size_t i = 0; i < du.segments.size() && eq; ++i) {
            if (du.segments[i] == dw.segments[i]) continue;
            auto swapped = detail::segment_swap(du.segments[i]);
            if (swapped && *swapped == dw.segments[i])
                swaps.push_back(i);
            else
                eq = false;
        }
    }
    if (eq) {
        out.justification = WordJustification::SwapRule;
        out.swap_segments = std::move(swaps);
        return out;
    }
    out.equal = false;
    out.refutation = refuting_valuation(u, w, WordTheoryLevel::L2);
    return out;
}

inline WordVerdict decide_word_theory(WordTheoryLevel level, const ExtWord& u, const ExtWord& w) {
    switch (level) {
        case WordTheoryLevel::L0: return decide_e0(u, w);
        case WordTheoryLevel::L1: return decide_e1(u, w);
        case WordTheoryLevel::L2: return decide_e2(u, w);
    }
    throw Error("unreachable");
}

}  // namespace kacd

#endif  // KACD_WORD_THEORY_HPP_
