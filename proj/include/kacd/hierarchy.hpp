#ifndef KACD_HIERARCHY_HPP_
#define KACD_HIERARCHY_HPP_

#include <random>
#include <string>
#include <vector>

#include "kacd/semantics.hpp"
#include "kacd/term.hpp"

namespace kacd {

inline TermPtr top_term() { return Term::complement(Term::zero()); }

/// 0 + t_0 + ... + t_{n-1}, left-associated.
inline TermPtr sum_terms(const std::vector<TermPtr>& ts) {
    TermPtr acc = Term::zero();
    for (const auto& t : ts) acc = Term::plus(acc, t);
    return acc;
}

inline std::vector<std::string> hierarchy_vars(std::size_t n) {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

/// The full-complement pair separating models with n letters from models with
/// n + 1: t1 accepts everything built from the variables' letters, t2 only
/// what avoids at least one of them.
inline std::pair<TermPtr, TermPtr> separation_terms(std::size_t n) {
    if (n < 1) throw FormatError("separation terms need n >= 1");
    std::vector<std::string> vars = hierarchy_vars(n);
    auto box = [&](const TermPtr& sum) {
        // (T (sum*)^- T)^-
        TermPtr inner = Term::complement(Term::star(sum));
        return Term::complement(Term::seq(Term::seq(top_term(), inner), top_term()));
    };
    std::vector<TermPtr> all;
    for (const auto& v : vars) all.push_back(Term::var(v));
    TermPtr t1 = box(sum_terms(all));
    std::vector<TermPtr> blocks;
    for (std::size_t j = 0; j <= n; ++j) {
        std::vector<TermPtr> rest;
        for (std::size_t i = 0; i <= n; ++i)
            if (i != j) rest.push_back(Term::var(vars[i]));
        blocks.push_back(box(sum_terms(rest)));
    }
    TermPtr t2 = sum_terms(blocks);
    return {t1, t2};
}

struct SeparationWitness {
    TermPtr t1, t2;
    Valuation valuation;
    Word witness;
};

/// The singleton valuation v(x_i) = {letter_i} over n + 1 letters refutes
/// t1 <= t2; the witness is the word listing every letter once. Verified
/// through the evaluator before returning.
inline SeparationWitness separation_counterexample(std::size_t n) {
    auto [t1, t2] = separation_terms(n);
    if (n + 1 > 26) throw BudgetExceeded("separation alphabets are limited to 26 letters");
    std::vector<std::string> letters;
    for (std::size_t i = 0; i <= n; ++i) letters.push_back(std::string(1, char('a' + i)));
    Valuation v{Alphabet(letters)};
    std::vector<std::string> vars = hierarchy_vars(n);
    for (std::size_t i = 0; i <= n; ++i) v.assign_words(vars[i], {Word{letters[i]}});
    Word witness;
    for (const auto& l : letters) witness.push_back(l);
    if (!membership(evaluate(t1, v), witness) || membership(evaluate(t2, v), witness))
        throw NotActuallyDistinct("separation witness failed to re-verify");
    return {t1, t2, std::move(v), std::move(witness)};
}

struct MembershipSideReport {
    std::size_t n = 0;
    std::size_t samples = 0;
    std::vector<std::size_t> violations;  // indices of samples where t1 <= t2 failed

    bool ok() const { return violations.empty(); }
};

/// Samples with the documented distribution: alphabet size uniform in [1, n],
/// each variable x0..xn either a set of at most 3 words of length at most 3
/// or the complement of one.
inline std::vector<Valuation> sample_hierarchy_valuations(std::size_t n, std::size_t count,
                                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Valuation> out;
    std::vector<std::string> vars = hierarchy_vars(n);
    for (std::size_t s = 0; s < count; ++s) {
        std::size_t size = 1 + (n > 1 ? rng() % n : 0);
        std::vector<std::string> letters;
        for (std::size_t i = 0; i < size; ++i) letters.push_back(std::string(1, char('a' + i)));
        Alphabet alphabet(letters);
        Valuation v{alphabet};
        for (const auto& x : vars) {
            std::size_t words = rng() % 4;
            std::vector<Word> set;
            for (std::size_t k = 0; k < words; ++k) {
                Word w;
                std::size_t len = rng() % 4;
                for (std::size_t c = 0; c < len; ++c) w.push_back(letters[rng() % size]);
                set.push_back(std::move(w));
            }
            if (rng() % 2)
                v.assign_cowords(x, set);
            else
                v.assign_words(x, set);
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Bounded evidence for the membership side of the separation: t1 <= t2 must
/// hold in every sampled model with at most n letters. A violation would
/// falsify the implementation, never the statement.
inline MembershipSideReport check_membership_side(std::size_t n,
                                                  const std::vector<Valuation>& samples) {
    auto [t1, t2] = separation_terms(n);
    MembershipSideReport report;
    report.n = n;
    report.samples = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].alphabet().size() > n)
            throw NotASubset("sample alphabet exceeds the membership side bound");
        if (includes(evaluate(t1, samples[i]), evaluate(t2, samples[i])))
            report.violations.push_back(i);
    }
    return report;
}

/// The letter-to-word homomorphism letter_i |-> a b^i.
inline Word binary_encode_word(const Alphabet& source, const Word& w) {
    Word out;
    for (const auto& sym : w) {
        std::size_t i = source.index_of(sym);
        out.push_back("a");
        for (std::size_t k = 0; k < i; ++k) out.push_back("b");
    }
    return out;
}

/// Homomorphic image of a valuation over {a, b}. Preserves the semantics of
/// complement-free terms; complements are not preserved (the image of a
/// cofinite language is not the complement of the image).
inline Valuation binary_encode(const Valuation& v) {
    if (v.alphabet().size() < 1) throw FormatError("binary encoding needs at least one letter");
    Alphabet target(std::vector<std::string>{"a", "b"});
    std::vector<Word> images;
    for (std::size_t i = 0; i < v.alphabet().size(); ++i) {
        Word img{"a"};
        for (std::size_t k = 0; k < i; ++k) img.push_back("b");
        images.push_back(std::move(img));
    }
    Valuation out{target};
    for (const auto& [name, entry] : v.entries()) {
        std::optional<ValueDesc> desc;
        if (entry.desc && entry.desc->kind == ValueDesc::Kind::Words) {
            std::vector<Word> mapped;
            for (const Word& w : entry.desc->words) mapped.push_back(binary_encode_word(v.alphabet(), w));
            desc = ValueDesc::of_words(std::move(mapped));
        }
        out.assign_automaton(name, substitute(entry.automaton, target, images), std::move(desc));
    }
    return out;
}

}  // namespace kacd

#endif  // KACD_HIERARCHY_HPP_
