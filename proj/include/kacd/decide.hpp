#ifndef KACD_DECIDE_HPP_
#define KACD_DECIDE_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kacd/semantics.hpp"
#include "kacd/term.hpp"

namespace kacd {

struct DecideConfig {
    /// Cap on the number m of abstraction blocks; procedures whose theorem
    /// bound exceeds it raise BudgetExceeded instead of deciding.
    std::size_t max_block_count = 6;
    enum class Mode { FullWordWitness, FullInclusion } mode = Mode::FullWordWitness;
    bool parallel = false;
};

// ---------------------------------------------------------------------------
// Stage enumeration: valuations over fresh letters l0..l_{m-1} whose values
// are sets of contiguous blocks l_i..l_{j-1} (the subwords of the full word).
// ---------------------------------------------------------------------------

/// The m(m+1)/2 + 1 distinct block words of stage m: the empty block first,
/// then the non-empty blocks (i,j) in lexicographic (i,j) order.
struct BlockList {
    std::size_t m = 0;
    std::vector<std::pair<std::size_t, std::size_t>> spans;  // spans[0] = (0,0) for the empty block

    explicit BlockList(std::size_t stage) : m(stage) {
        spans.emplace_back(0, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j <= m; ++j) spans.emplace_back(i, j);
    }

    std::size_t size() const { return spans.size(); }

    Word word_of(std::size_t b) const {
        Word w;
        for (std::size_t k = spans[b].first; k < spans[b].second; ++k)
            w.push_back("l" + std::to_string(k));
        return w;
    }
};

/// One stage of the words-to-letters enumeration over a fixed variable set.
/// A joint index decodes into one block-subset mask per variable; the
/// alphabetically first variable is the most significant digit.
struct StageEnum {
    std::size_t m;
    BlockList blocks;
    std::vector<std::string> vars;  // sorted
    std::uint64_t per_var;

    StageEnum(std::size_t stage, std::vector<std::string> sorted_vars)
        : m(stage), blocks(stage), vars(std::move(sorted_vars)) {
        if (blocks.size() > 62) throw BudgetExceeded("block count too large to enumerate");
        per_var = std::uint64_t{1} << blocks.size();
    }

    /// per_var^k, saturating.
    std::uint64_t total() const {
        std::uint64_t t = 1;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (t > (std::uint64_t{1} << 62) / per_var) return std::uint64_t{1} << 63;
            t *= per_var;
        }
        return t;
    }

    std::vector<std::uint64_t> masks_of(std::uint64_t joint) const {
        std::vector<std::uint64_t> masks(vars.size(), 0);
        for (std::size_t k = vars.size(); k-- > 0;) {
            masks[k] = joint % per_var;
            joint /= per_var;
        }
        return masks;
    }

    Valuation materialize(const std::vector<std::uint64_t>& masks) const {
        Valuation v{Alphabet(fresh_letters(m))};
        for (std::size_t k = 0; k < vars.size(); ++k) {
            std::vector<Word> words;
            for (std::size_t b = 0; b < blocks.size(); ++b)
                if ((masks[k] >> b) & 1) words.push_back(blocks.word_of(b));
            v.assign_words(vars[k], std::move(words));
        }
        return v;
    }

    Word full_word() const {
        Word w;
        for (std::size_t k = 0; k < m; ++k) w.push_back("l" + std::to_string(k));
        return w;
    }
};

namespace detail {

// Span bitsets over the stage's full word packed into one machine word;
// usable while (m+1)^2 <= 64, i.e. m <= 7. Slot of (i,j) is i*(m+1)+j.
struct SmallSpanCtx {
    std::size_t m;
    std::uint64_t all_valid;   // every (i,j) with i <= j
    std::uint64_t diagonal;    // every (i,i)
    std::uint64_t strict;      // every (i,j) with i < j

    explicit SmallSpanCtx(std::size_t stage) : m(stage), all_valid(0), diagonal(0), strict(0) {
        for (std::size_t i = 0; i <= m; ++i) {
            for (std::size_t j = i; j <= m; ++j) {
                std::uint64_t bit = std::uint64_t{1} << (i * (m + 1) + j);
                all_valid |= bit;
                if (i == j) diagonal |= bit; else strict |= bit;
            }
        }
    }

    std::uint64_t join(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i <= m; ++i) {
            for (std::size_t k = i; k <= m; ++k) {
                if (!((a >> (i * (m + 1) + k)) & 1)) continue;
                for (std::size_t j = k; j <= m; ++j)
                    if ((b >> (k * (m + 1) + j)) & 1) r |= std::uint64_t{1} << (i * (m + 1) + j);
            }
        }
        return r;
    }

    std::uint64_t closure(std::uint64_t a) const {
        std::uint64_t r = diagonal | a;
        for (;;) {
            std::uint64_t nxt = r | join(r, r);
            if (nxt == r) return r;
            r = nxt;
        }
    }
};

/// Span set of a block mask: the selected non-empty blocks, plus the whole
/// diagonal when the empty block is selected.
inline std::uint64_t mask_spans(std::uint64_t mask, const BlockList& blocks, const SmallSpanCtx& ctx) {
    std::uint64_t s = (mask & 1) ? ctx.diagonal : 0;
    for (std::size_t b = 1; b < blocks.size(); ++b)
        if ((mask >> b) & 1)
            s |= std::uint64_t{1} << (blocks.spans[b].first * (ctx.m + 1) + blocks.spans[b].second);
    return s;
}

/// Spans of the full word that belong to the term's value under the stage
/// valuation described by per-variable span sets.
inline std::uint64_t stage_term_spans(const TermPtr& t, const SmallSpanCtx& ctx,
                                      const std::vector<std::string>& vars,
                                      const std::vector<std::uint64_t>& var_spans) {
    auto lookup = [&](const std::string& name) -> std::uint64_t {
        for (std::size_t k = 0; k < vars.size(); ++k)
            if (vars[k] == name) return var_spans[k];
        return 0;  // unmentioned variables default to the empty language
    };
    switch (t->kind) {
        case TermKind::Var:
            return lookup(t->name);
        case TermKind::CoVar:
            return ctx.all_valid & ~lookup(t->name);
        case TermKind::One:
            return ctx.diagonal;
        case TermKind::Zero:
            return 0;
        case TermKind::CoOne:
            return ctx.strict;
        case TermKind::Plus:
            return stage_term_spans(t->left, ctx, vars, var_spans) |
                   stage_term_spans(t->right, ctx, vars, var_spans);
        case TermKind::Seq:
            return ctx.join(stage_term_spans(t->left, ctx, vars, var_spans),
                            stage_term_spans(t->right, ctx, vars, var_spans));
        case TermKind::Star:
            return ctx.closure(stage_term_spans(t->left, ctx, vars, var_spans));
        case TermKind::Compl:
            throw FragmentError("decision procedures cover the !x/!1 fragment only");
    }
    throw Error("unreachable");
}

inline void require_cx_c1(const TermPtr& t, const char* role) {
    if (classify_fragment(t) > FragmentClass::KA_CX_C1)
        throw FragmentError(std::string(role) + " uses full complement; only !x and !1 are decidable here");
}

/// Scans joint indices [0, total) for the first one accepted by `test`,
/// preserving the canonical order. The parallel path works in synchronous
/// chunks and reduces to the minimal hit.
template <typename Test>
inline std::optional<std::uint64_t> first_hit(std::uint64_t total, bool parallel, Test&& test) {
    if (!parallel) {
        for (std::uint64_t i = 0; i < total; ++i)
            if (test(i)) return i;
        return std::nullopt;
    }
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t chunk = 8192;
    for (std::uint64_t base = 0; base < total; base += chunk) {
        std::uint64_t end = std::min(total, base + chunk);
        std::vector<std::uint64_t> hit(workers, UINT64_MAX);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t i = base + w; i < end; i += workers)
                    if (test(i)) {
                        hit[w] = i;
                        return;
                    }
            });
        }
        for (auto& th : pool) th.join();
        std::uint64_t best = UINT64_MAX;
        for (std::uint64_t h : hit) best = std::min(best, h);
        if (best != UINT64_MAX) {
            // the per-worker strided scan may overshoot the minimal hit
            for (std::uint64_t i = base; i < best; ++i)
                if (test(i)) return i;
            return best;
        }
    }
    return std::nullopt;
}

struct StageHit {
    std::size_t m;
    Valuation valuation;
    Word witness;
};

/// Runs one enumeration stage. In FullWordWitness mode refutation means the
/// full word l0..l_{m-1} lies in the left value but not the right one; in
/// FullInclusion mode the whole language inclusion is checked per valuation.
inline std::optional<StageHit> run_stage(const StageEnum& st, const TermPtr& lhs, const TermPtr& rhs,
                                         const DecideConfig& cfg) {
    std::uint64_t total = st.total();
    if (cfg.mode == DecideConfig::Mode::FullWordWitness && st.m <= 7) {
        SmallSpanCtx ctx(st.m);
        std::uint64_t full_bit = std::uint64_t{1} << (0 * (st.m + 1) + st.m);
        auto test = [&](std::uint64_t joint) {
            std::vector<std::uint64_t> masks = st.masks_of(joint);
            std::vector<std::uint64_t> var_spans(masks.size());
            for (std::size_t k = 0; k < masks.size(); ++k)
                var_spans[k] = mask_spans(masks[k], st.blocks, ctx);
            if (!(stage_term_spans(lhs, ctx, st.vars, var_spans) & full_bit)) return false;
            return !(stage_term_spans(rhs, ctx, st.vars, var_spans) & full_bit);
        };
        auto hit = first_hit(total, cfg.parallel, test);
        if (!hit) return std::nullopt;
        return StageHit{st.m, st.materialize(st.masks_of(*hit)), st.full_word()};
    }
    // generic path: materialized valuations
    Word full = st.full_word();
    if (cfg.mode == DecideConfig::Mode::FullWordWitness) {
        auto test = [&](std::uint64_t joint) {
            Valuation v = st.materialize(st.masks_of(joint));
            return membership_dp(full, lhs, v) && !membership_dp(full, rhs, v);
        };
        auto hit = first_hit(total, cfg.parallel, test);
        if (!hit) return std::nullopt;
        return StageHit{st.m, st.materialize(st.masks_of(*hit)), full};
    }
    // FullInclusion: cross-check mode via the automata kernel
    std::optional<StageHit> out;
    auto test = [&](std::uint64_t joint) {
        Valuation v = st.materialize(st.masks_of(joint));
        return includes(evaluate(lhs, v), evaluate(rhs, v)).has_value();
    };
    auto hit = first_hit(total, cfg.parallel, test);
    if (!hit) return std::nullopt;
    Valuation v = st.materialize(st.masks_of(*hit));
    Word witness = *includes(evaluate(lhs, v), evaluate(rhs, v));
    return StageHit{st.m, std::move(v), std::move(witness)};
}

inline std::vector<std::string> sorted_vars(const std::set<std::string>& s) {
    return std::vector<std::string>(s.begin(), s.end());
}

inline Verdict stage_verdict(const TermPtr& lhs, const TermPtr& rhs, StageHit hit) {
    Refutation r{std::move(hit.valuation), std::move(hit.witness)};
    r.block_count = hit.m;
    verify_refutation(lhs, rhs, r);
    return Verdict::no(std::move(r));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fragment decision procedures
// ---------------------------------------------------------------------------

/// Is 1 <= t valid in every language model? Reduces to the epsilon profiles.
inline Verdict decide_identity_inclusion(const TermPtr& t, const DecideConfig& cfg = {}) {
    detail::require_cx_c1(t, "the term");
    StageEnum st(0, detail::sorted_vars(vars_of(t)));
    TermPtr one = Term::one();
    if (auto hit = detail::run_stage(st, one, t, cfg))
        return detail::stage_verdict(one, t, std::move(*hit));
    return Verdict::yes();
}

/// Is x <= t valid in every language model? One-letter valuations with values
/// inside {epsilon, letter} suffice.
inline Verdict decide_variable_inclusion(const std::string& x, const TermPtr& t,
                                         const DecideConfig& cfg = {}) {
    detail::require_cx_c1(t, "the term");
    std::set<std::string> vs = vars_of(t);
    vs.insert(x);
    StageEnum st(1, detail::sorted_vars(vs));
    detail::SmallSpanCtx ctx(1);
    std::uint64_t eps_bit = 1;           // span (0,0)
    std::uint64_t letter_bit = 2;        // span (0,1)
    std::size_t xi = 0;
    while (st.vars[xi] != x) ++xi;
    auto test = [&](std::uint64_t joint) {
        std::vector<std::uint64_t> masks = st.masks_of(joint);
        std::vector<std::uint64_t> var_spans(masks.size());
        for (std::size_t k = 0; k < masks.size(); ++k)
            var_spans[k] = detail::mask_spans(masks[k], st.blocks, ctx);
        std::uint64_t t_spans = detail::stage_term_spans(t, ctx, st.vars, var_spans);
        if ((var_spans[xi] & letter_bit) && !(t_spans & letter_bit)) return 1;
        if ((var_spans[xi] & eps_bit) && !(t_spans & eps_bit)) return 2;
        return 0;
    };
    auto hit = detail::first_hit(st.total(), cfg.parallel, [&](std::uint64_t j) { return test(j) != 0; });
    if (!hit) return Verdict::yes();
    int kind = test(*hit);
    Refutation r{st.materialize(st.masks_of(*hit)), kind == 1 ? Word{"l0"} : Word{}};
    r.block_count = 1;
    TermPtr lhs = Term::var(x);
    verify_refutation(lhs, t, r);
    return Verdict::no(std::move(r));
}

/// Is u <= t valid in every language model, for an extended word u? Block
/// valuations with at most |u| letters are complete.
inline Verdict decide_word_inclusion(const ExtWord& u, const TermPtr& t,
                                     const DecideConfig& cfg = {}) {
    detail::require_cx_c1(t, "the term");
    if (u.size() > cfg.max_block_count)
        throw BudgetExceeded("word needs " + std::to_string(u.size()) +
                             " blocks but max_block_count is " + std::to_string(cfg.max_block_count));
    std::set<std::string> vs = vars_of(t);
    for (const auto& l : u)
        if (l.kind != ExtLetter::Kind::NotOne) vs.insert(l.name);
    TermPtr u_term = ext_word_to_term(u);
    for (std::size_t m = 0; m <= u.size(); ++m) {
        StageEnum st(m, detail::sorted_vars(vs));
        if (auto hit = detail::run_stage(st, u_term, t, cfg))
            return detail::stage_verdict(u_term, t, std::move(*hit));
    }
    return Verdict::yes();
}

/// Is t1 <= t2 valid in every language model, for star-free t1? Stages range
/// up to the supremum length of t1's extended-alphabet language.
inline Verdict decide_starfree_inclusion(const TermPtr& t1, const TermPtr& t2,
                                         const DecideConfig& cfg = {}) {
    if (!is_star_free(t1)) throw NotStarFree("left-hand side contains a Kleene star");
    detail::require_cx_c1(t1, "the left-hand side");
    detail::require_cx_c1(t2, "the right-hand side");
    SupLength sl = sup_length(t1);
    if (sl.omega) throw NotStarFree("left-hand side has unbounded word lengths");
    if (sl.n > cfg.max_block_count)
        throw BudgetExceeded("left-hand side needs " + std::to_string(sl.n) +
                             " blocks but max_block_count is " + std::to_string(cfg.max_block_count));
    std::set<std::string> vs = vars_of(t1);
    collect_vars(t2, vs);
    for (std::size_t m = 0; m <= sl.n; ++m) {
        StageEnum st(m, detail::sorted_vars(vs));
        if (auto hit = detail::run_stage(st, t1, t2, cfg))
            return detail::stage_verdict(t1, t2, std::move(*hit));
    }
    return Verdict::yes();
}

/// Is T <= t valid in every language model? T = x + !x for a fresh variable
/// has supremum length 1, so only the epsilon stage and the one-letter stage
/// are needed; the left membership is always true.
inline Verdict decide_universality(const TermPtr& t, const DecideConfig& cfg = {}) {
    detail::require_cx_c1(t, "the term");
    TermPtr top = Term::plus(Term::one(), Term::coone());
    std::vector<std::string> vs = detail::sorted_vars(vars_of(t));
    for (std::size_t m = 0; m <= 1; ++m) {
        StageEnum st(m, vs);
        detail::SmallSpanCtx ctx(m);
        std::uint64_t full_bit = std::uint64_t{1} << m;  // span (0,m)
        auto test = [&](std::uint64_t joint) {
            std::vector<std::uint64_t> masks = st.masks_of(joint);
            std::vector<std::uint64_t> var_spans(masks.size());
            for (std::size_t k = 0; k < masks.size(); ++k)
                var_spans[k] = detail::mask_spans(masks[k], st.blocks, ctx);
            return !(detail::stage_term_spans(t, ctx, st.vars, var_spans) & full_bit);
        };
        auto hit = detail::first_hit(st.total(), cfg.parallel, test);
        if (hit) {
            Refutation r{st.materialize(st.masks_of(*hit)), st.full_word()};
            r.block_count = m;
            verify_refutation(top, t, r);
            return Verdict::no(std::move(r));
        }
    }
    return Verdict::yes();
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

enum class Relation { Le, Eq };

struct AutoResult {
    std::optional<Verdict> verdict;
    std::string procedure;          // routing of lhs <= rhs
    std::string procedure_reverse;  // routing of rhs <= lhs (Eq only)
    std::string unsupported_reason;

    bool unsupported() const { return !verdict.has_value(); }
};

namespace detail {

inline bool is_top_pattern(const TermPtr& t) {
    if (t->kind == TermKind::Compl && t->left->kind == TermKind::Zero) return true;
    if (t->kind != TermKind::Plus) return false;
    return (t->left->kind == TermKind::One && t->right->kind == TermKind::CoOne) ||
           (t->left->kind == TermKind::CoOne && t->right->kind == TermKind::One);
}

struct Route {
    std::string procedure;  // empty when unsupported
    std::string reason;
};

inline Route route_inclusion(const TermPtr& lhs, const TermPtr& rhs) {
    if (classify_fragment(rhs) > FragmentClass::KA_CX_C1)
        return {"", "right-hand side uses full complement"};
    if (lhs->kind == TermKind::One) return {"identity", ""};
    if (lhs->kind == TermKind::Var) return {"variable", ""};
    if (is_top_pattern(lhs)) return {"universality", ""};
    if (term_to_ext_word(lhs)) return {"word", ""};
    if (classify_fragment(lhs) > FragmentClass::KA_CX_C1)
        return {"", "left-hand side uses full complement"};
    if (!is_star_free(lhs)) return {"", "left-hand side has a star and is not a word"};
    return {"starfree", ""};
}

inline Verdict run_routed(const std::string& procedure, const TermPtr& lhs, const TermPtr& rhs,
                          const DecideConfig& cfg) {
    if (procedure == "identity") return decide_identity_inclusion(rhs, cfg);
    if (procedure == "variable") return decide_variable_inclusion(lhs->name, rhs, cfg);
    if (procedure == "universality") return decide_universality(rhs, cfg);
    if (procedure == "word") return decide_word_inclusion(*term_to_ext_word(lhs), rhs, cfg);
    return decide_starfree_inclusion(lhs, rhs, cfg);
}

}  // namespace detail

/// Routes to the most specific applicable procedure. UnsupportedFragment is a
/// result, not an error.
inline AutoResult decide_auto(const TermPtr& lhs, Relation rel, const TermPtr& rhs,
                              const DecideConfig& cfg = {}) {
    AutoResult out;
    detail::Route fwd = detail::route_inclusion(lhs, rhs);
    if (rel == Relation::Le) {
        if (fwd.procedure.empty()) {
            out.unsupported_reason = fwd.reason;
            return out;
        }
        out.procedure = fwd.procedure;
        out.verdict = detail::run_routed(fwd.procedure, lhs, rhs, cfg);
        return out;
    }
    detail::Route bwd = detail::route_inclusion(rhs, lhs);
    if (fwd.procedure.empty() || bwd.procedure.empty()) {
        out.unsupported_reason = fwd.procedure.empty()
                                     ? "direction lhs <= rhs: " + fwd.reason
                                     : "direction rhs <= lhs: " + bwd.reason;
        return out;
    }
    out.procedure = fwd.procedure;
    out.procedure_reverse = bwd.procedure;
    Verdict forward = detail::run_routed(fwd.procedure, lhs, rhs, cfg);
    if (!forward.holds) {
        forward.refutation->direction = Direction::LhsLeRhs;
        out.verdict = std::move(forward);
        return out;
    }
    Verdict backward = detail::run_routed(bwd.procedure, rhs, lhs, cfg);
    if (!backward.holds) backward.refutation->direction = Direction::RhsLeLhs;
    out.verdict = std::move(backward);
    return out;
}

// ---------------------------------------------------------------------------
// Bounded brute-force refutation search
// ---------------------------------------------------------------------------

struct OracleBudget {
    std::size_t max_alphabet = 2;
    std::size_t max_value_len = 2;
    std::size_t max_values_per_var = 2;
    std::uint64_t time_ms = 0;  // 0 = no time limit
};

/// One candidate variable value: a finite word set, or its complement.
struct ValueSpec {
    std::vector<Word> words;
    bool cofinite = false;
};

inline Alphabet oracle_alphabet(std::size_t size) {
    if (size > 26) throw BudgetExceeded("oracle alphabets are limited to 26 letters");
    std::vector<std::string> letters;
    for (std::size_t i = 0; i < size; ++i) letters.push_back(std::string(1, char('a' + i)));
    return Alphabet(letters);
}

inline std::vector<Word> all_words_up_to(const Alphabet& a, std::size_t len) {
    std::vector<Word> out{Word{}};
    std::size_t layer_begin = 0;
    for (std::size_t l = 0; l < len; ++l) {
        std::size_t layer_end = out.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i)
            for (const auto& sym : a.letters()) {
                Word w = out[i];
                w.push_back(sym);
                out.push_back(std::move(w));
            }
        layer_begin = layer_end;
    }
    return out;  // shortlex order by construction
}

/// Candidate values in the oracle's canonical order: finite sets by
/// (cardinality, lexicographic word-index combination), then the same list
/// with each set complemented.
inline std::vector<ValueSpec> oracle_value_specs(const Alphabet& a, const OracleBudget& budget) {
    std::vector<Word> domain = all_words_up_to(a, budget.max_value_len);
    std::vector<std::vector<Word>> sets;
    std::vector<std::size_t> combo;
    auto emit = [&]() {
        std::vector<Word> s;
        for (std::size_t i : combo) s.push_back(domain[i]);
        sets.push_back(std::move(s));
    };
    std::size_t cap = std::min(budget.max_values_per_var, domain.size());
    for (std::size_t size = 0; size <= cap; ++size) {
        combo.assign(size, 0);
        for (std::size_t i = 0; i < size; ++i) combo[i] = i;
        if (size == 0) {
            emit();
            continue;
        }
        for (;;) {
            emit();
            std::size_t i = size;
            while (i-- > 0) {
                if (combo[i] + (size - i) < domain.size()) {
                    ++combo[i];
                    for (std::size_t j = i + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
                    break;
                }
                if (i == 0) goto next_size;
            }
        }
    next_size:;
    }
    std::vector<ValueSpec> out;
    for (const auto& s : sets) out.push_back({s, false});
    for (const auto& s : sets) out.push_back({s, true});
    return out;
}

struct OracleCounterexample {
    Valuation valuation;
    Word witness;
};

/// Systematic bounded search for a language-model counterexample to t1 <= t2.
/// Accepts the full fragment; evaluates through the automata kernel. Returns
/// the first refutation in the canonical order, or None (never "holds").
inline std::optional<OracleCounterexample> oracle_refute(const TermPtr& t1, const TermPtr& t2,
                                                         const OracleBudget& budget = {}) {
    std::set<std::string> vs = vars_of(t1);
    collect_vars(t2, vs);
    std::vector<std::string> vars = detail::sorted_vars(vs);
    auto start = std::chrono::steady_clock::now();
    auto expired = [&] {
        if (budget.time_ms == 0) return false;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        return static_cast<std::uint64_t>(ms) >= budget.time_ms;
    };
    for (std::size_t size = 0; size <= budget.max_alphabet; ++size) {
        Alphabet alphabet = oracle_alphabet(size);
        std::vector<ValueSpec> specs = oracle_value_specs(alphabet, budget);
        std::vector<std::size_t> choice(vars.size(), 0);
        std::uint64_t ticks = 0;
        for (;;) {
            if ((++ticks & 63) == 0 && expired()) return std::nullopt;
            Valuation v{alphabet};
            for (std::size_t k = 0; k < vars.size(); ++k) {
                const ValueSpec& spec = specs[choice[k]];
                if (spec.cofinite)
                    v.assign_cowords(vars[k], spec.words);
                else
                    v.assign_words(vars[k], spec.words);
            }
            if (auto w = includes(evaluate(t1, v), evaluate(t2, v)))
                return OracleCounterexample{std::move(v), std::move(*w)};
            // odometer, last variable fastest
            std::size_t k = vars.size();
            while (k-- > 0) {
                if (++choice[k] < specs.size()) break;
                choice[k] = 0;
                if (k == 0) goto next_alphabet;
            }
            if (vars.empty()) break;
        }
    next_alphabet:;
    }
    return std::nullopt;
}

}  // namespace kacd

#endif  // KACD_DECIDE_HPP_
