#ifndef KACD_TERM_HPP_
#define KACD_TERM_HPP_

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kacd/automaton.hpp"
#include "kacd/errors.hpp"

namespace kacd {

/// Nested term fragments. Each class extends the previous one:
/// KA adds nothing, KA_CX adds complemented variables (!x), KA_CX_C1 adds the
/// complemented identity (!1), KA_FULL adds arbitrary complement.
enum class FragmentClass { KA = 0, KA_CX = 1, KA_CX_C1 = 2, KA_FULL = 3 };

inline const char* fragment_name(FragmentClass f) {
    switch (f) {
        case FragmentClass::KA: return "KA";
        case FragmentClass::KA_CX: return "KA_CX";
        case FragmentClass::KA_CX_C1: return "KA_CX_C1";
        case FragmentClass::KA_FULL: return "KA_FULL";
    }
    return "?";
}

enum class TermKind { Var, CoVar, One, Zero, CoOne, Plus, Seq, Star, Compl };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term AST. Complement of a variable or of 1 is represented by the
/// dedicated CoVar/CoOne leaves; a Compl node marks arbitrary complement and
/// is only legal in KA_FULL.
struct Term {
    TermKind kind;
    std::string name;  // Var, CoVar
    TermPtr left;      // Plus, Seq, Star (body), Compl (body)
    TermPtr right;     // Plus, Seq

    static TermPtr var(std::string n) { return make(TermKind::Var, std::move(n), nullptr, nullptr); }
    static TermPtr covar(std::string n) { return make(TermKind::CoVar, std::move(n), nullptr, nullptr); }
    static TermPtr one() { return make(TermKind::One, "", nullptr, nullptr); }
    static TermPtr zero() { return make(TermKind::Zero, "", nullptr, nullptr); }
    static TermPtr coone() { return make(TermKind::CoOne, "", nullptr, nullptr); }
    static TermPtr plus(TermPtr a, TermPtr b) { return make(TermKind::Plus, "", std::move(a), std::move(b)); }
    static TermPtr seq(TermPtr a, TermPtr b) { return make(TermKind::Seq, "", std::move(a), std::move(b)); }
    static TermPtr star(TermPtr a) { return make(TermKind::Star, "", std::move(a), nullptr); }
    static TermPtr complement(TermPtr a) { return make(TermKind::Compl, "", std::move(a), nullptr); }

  private:
    static TermPtr make(TermKind k, std::string n, TermPtr l, TermPtr r) {
        auto t = std::make_shared<Term>();
        t->kind = k;
        t->name = std::move(n);
        t->left = std::move(l);
        t->right = std::move(r);
        return t;
    }
};

inline bool equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind != b->kind || a->name != b->name) return false;
    switch (a->kind) {
        case TermKind::Plus:
        case TermKind::Seq:
            return equal(a->left, b->left) && equal(a->right, b->right);
        case TermKind::Star:
        case TermKind::Compl:
            return equal(a->left, b->left);
        default:
            return true;
    }
}

inline std::size_t term_size(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Plus:
        case TermKind::Seq:
            return 1 + term_size(t->left) + term_size(t->right);
        case TermKind::Star:
        case TermKind::Compl:
            return 1 + term_size(t->left);
        default:
            return 1;
    }
}

inline FragmentClass classify_fragment(const TermPtr& t) {
    auto join = [](FragmentClass a, FragmentClass b) { return a < b ? b : a; };
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::One:
        case TermKind::Zero:
            return FragmentClass::KA;
        case TermKind::CoVar:
            return FragmentClass::KA_CX;
        case TermKind::CoOne:
            return FragmentClass::KA_CX_C1;
        case TermKind::Compl:
            return FragmentClass::KA_FULL;
        case TermKind::Star:
            return classify_fragment(t->left);
        case TermKind::Plus:
        case TermKind::Seq:
            return join(classify_fragment(t->left), classify_fragment(t->right));
    }
    return FragmentClass::KA_FULL;
}

inline bool is_star_free(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Star:
            return false;
        case TermKind::Plus:
        case TermKind::Seq:
            return is_star_free(t->left) && is_star_free(t->right);
        case TermKind::Compl:
            return is_star_free(t->left);
        default:
            return true;
    }
}

inline void collect_vars(const TermPtr& t, std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::CoVar:
            out.insert(t->name);
            break;
        case TermKind::Plus:
        case TermKind::Seq:
            collect_vars(t->left, out);
            collect_vars(t->right, out);
            break;
        case TermKind::Star:
        case TermKind::Compl:
            collect_vars(t->left, out);
            break;
        default:
            break;
    }
}

inline std::set<std::string> vars_of(const TermPtr& t) {
    std::set<std::string> out;
    collect_vars(t, out);
    return out;
}

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   term  := sum
//   sum   := cat ("+" cat)*
//   cat   := unary ((";")? unary)*
//   unary := atom ("*")*
//   atom  := "0" | "1" | "!" atom | ident | "(" term ")"
//   ident := [a-zA-Z][a-zA-Z0-9_]*
// ---------------------------------------------------------------------------

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class TermParser {
  public:
    TermParser(const std::string& text, FragmentClass allowed) : text_(text), allowed_(allowed) {}

    TermPtr run() {
        skip_ws();
        TermPtr t = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
        return t;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool atom_ahead() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '0' || c == '1' || c == '!' || c == '(' || ident_start(c);
    }

    TermPtr parse_sum() {
        TermPtr t = parse_cat();
        while (peek('+')) {
            ++pos_;
            t = Term::plus(t, parse_cat());
        }
        return t;
    }

    TermPtr parse_cat() {
        TermPtr t = parse_unary();
        for (;;) {
            if (peek(';')) {
                ++pos_;
                t = Term::seq(t, parse_unary());
            } else if (atom_ahead()) {
                t = Term::seq(t, parse_unary());
            } else {
                break;
            }
        }
        return t;
    }

    TermPtr parse_unary() {
        TermPtr t = parse_atom();
        while (peek('*')) {
            ++pos_;
            t = Term::star(t);
        }
        return t;
    }

    TermPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "'0', '1', '!', '(' or identifier");
        char c = text_[pos_];
        if (c == '0') {
            ++pos_;
            return Term::zero();
        }
        if (c == '1') {
            ++pos_;
            return Term::one();
        }
        if (c == '(') {
            ++pos_;
            TermPtr t = parse_sum();
            if (!peek(')')) throw SyntaxError(pos_, "')'");
            ++pos_;
            return t;
        }
        if (c == '!') {
            std::size_t at = pos_;
            ++pos_;
            return negate(parse_atom(), at);
        }
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
            return Term::var(text_.substr(start, pos_ - start));
        }
        throw SyntaxError(pos_, "'0', '1', '!', '(' or identifier");
    }

    /// Complement normalization: !x |-> CoVar, !1 |-> CoOne, !!t |-> t; any
    /// other body needs the full fragment.
    TermPtr negate(const TermPtr& body, std::size_t at) {
        switch (body->kind) {
            case TermKind::Var:
                require(FragmentClass::KA_CX, "'!' on a variable", at);
                return Term::covar(body->name);
            case TermKind::CoVar:
                require(FragmentClass::KA_CX, "'!' on a variable", at);
                return Term::var(body->name);
            case TermKind::One:
                require(FragmentClass::KA_CX_C1, "'!1'", at);
                return Term::coone();
            case TermKind::CoOne:
                require(FragmentClass::KA_CX_C1, "'!1'", at);
                return Term::one();
            case TermKind::Compl:
                return body->left;
            default:
                require(FragmentClass::KA_FULL, "'!' on a compound term", at);
                return Term::complement(body);
        }
    }

    void require(FragmentClass needed, const std::string& what, std::size_t at) {
        if (allowed_ < needed) {
            throw FragmentError(what + " at position " + std::to_string(at) + " needs fragment " +
                                fragment_name(needed) + " but only " + fragment_name(allowed_) +
                                " is allowed");
        }
    }

    const std::string& text_;
    FragmentClass allowed_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline TermPtr parse_term(const std::string& text, FragmentClass allowed = FragmentClass::KA_FULL) {
    return detail::TermParser(text, allowed).run();
}

namespace detail {

// rendering precedence: Plus = 0, Seq = 1, Star = 2, leaves/Compl = 3;
// ctx is the minimal precedence the surrounding position accepts bare
inline void render(const TermPtr& t, int ctx, std::string& out) {
    switch (t->kind) {
        case TermKind::Var:
            out += t->name;
            break;
        case TermKind::CoVar:
            out += '!';
            out += t->name;
            break;
        case TermKind::One:
            out += '1';
            break;
        case TermKind::Zero:
            out += '0';
            break;
        case TermKind::CoOne:
            out += "!1";
            break;
        case TermKind::Plus: {
            bool need = 0 < ctx;
            if (need) out += '(';
            render(t->left, 0, out);
            out += " + ";
            // '+' parses left-associatively: a Plus right child keeps parens
            render(t->right, 1, out);
            if (need) out += ')';
            break;
        }
        case TermKind::Seq: {
            bool need = 1 < ctx;
            if (need) out += '(';
            render(t->left, 1, out);
            out += " ; ";
            render(t->right, 2, out);
            if (need) out += ')';
            break;
        }
        case TermKind::Star: {
            bool need = 2 < ctx;
            if (need) out += '(';
            render(t->left, 3, out);
            out += '*';
            if (need) out += ')';
            break;
        }
        case TermKind::Compl:
            // body is never a bare leaf on parser-normalized terms
            out += "!(";
            render(t->left, 0, out);
            out += ')';
            break;
    }
}

}  // namespace detail

/// Output re-parses to a structurally identical term (for parser-normalized
/// terms; a hand-built Compl over a leaf renders as its normalized form).
inline std::string render_term(const TermPtr& t) {
    std::string out;
    detail::render(t, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Extended alphabet: one positive and one negative letter per variable, plus
// the complemented identity.
// ---------------------------------------------------------------------------

struct ExtLetter {
    enum class Kind { Pos = 0, Neg = 1, NotOne = 2 };
    Kind kind;
    std::string name;  // empty for NotOne

    static ExtLetter pos(std::string n) { return {Kind::Pos, std::move(n)}; }
    static ExtLetter neg(std::string n) { return {Kind::Neg, std::move(n)}; }
    static ExtLetter not_one() { return {Kind::NotOne, ""}; }

    bool operator==(const ExtLetter& o) const { return kind == o.kind && name == o.name; }
    bool operator!=(const ExtLetter& o) const { return !(*this == o); }
    bool operator<(const ExtLetter& o) const {
        if (kind != o.kind) return kind < o.kind;
        return name < o.name;
    }

    std::string token() const {
        switch (kind) {
            case Kind::Pos: return name;
            case Kind::Neg: return "!" + name;
            case Kind::NotOne: return "!1";
        }
        return "";
    }
};

using ExtWord = std::vector<ExtLetter>;

/// Whitespace-separated tokens `x`, `!x`, `!1`; empty input is the empty word.
inline ExtWord parse_ext_word(const std::string& text) {
    ExtWord out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            continue;
        }
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string tok = text.substr(start, pos - start);
        if (tok == "!1") {
            out.push_back(ExtLetter::not_one());
            continue;
        }
        bool neg = tok[0] == '!';
        std::string name = neg ? tok.substr(1) : tok;
        if (name.empty() || !detail::ident_start(name[0])) throw SyntaxError(start, "letter token");
        for (char c : name)
            if (!detail::ident_char(c)) throw SyntaxError(start, "letter token");
        out.push_back(neg ? ExtLetter::neg(name) : ExtLetter::pos(name));
    }
    return out;
}

inline std::string render_ext_word(const ExtWord& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i].token();
    }
    return out;
}

/// The empty word denotes 1; otherwise a left-associated composition chain.
inline TermPtr ext_word_to_term(const ExtWord& w) {
    if (w.empty()) return Term::one();
    auto leaf = [](const ExtLetter& l) {
        switch (l.kind) {
            case ExtLetter::Kind::Pos: return Term::var(l.name);
            case ExtLetter::Kind::Neg: return Term::covar(l.name);
            case ExtLetter::Kind::NotOne: return Term::coone();
        }
        return Term::one();
    };
    TermPtr t = leaf(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) t = Term::seq(t, leaf(w[i]));
    return t;
}

/// Recovers an extended word from a composition chain of letter leaves; the
/// term 1 stands for the empty word. None when the term has another shape.
inline std::optional<ExtWord> term_to_ext_word(const TermPtr& t) {
    if (t->kind == TermKind::One) return ExtWord{};
    ExtWord out;
    bool ok = true;
    auto walk = [&](auto&& self, const TermPtr& n) -> void {
        if (!ok) return;
        switch (n->kind) {
            case TermKind::Seq:
                self(self, n->left);
                self(self, n->right);
                break;
            case TermKind::Var:
                out.push_back(ExtLetter::pos(n->name));
                break;
            case TermKind::CoVar:
                out.push_back(ExtLetter::neg(n->name));
                break;
            case TermKind::CoOne:
                out.push_back(ExtLetter::not_one());
                break;
            default:
                ok = false;
        }
    };
    walk(walk, t);
    if (!ok) return std::nullopt;
    return out;
}

inline std::set<ExtLetter> occ(const ExtWord& w) {
    return std::set<ExtLetter>(w.begin(), w.end());
}

inline std::size_t count(const ExtWord& w, const std::set<ExtLetter>& letters) {
    std::size_t n = 0;
    for (const auto& l : w)
        if (letters.count(l)) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// The language of a term read as a regular expression over the extended
// alphabet, and the supremum of its word lengths.
// ---------------------------------------------------------------------------

struct SupLength {
    bool omega = false;
    std::size_t n = 0;

    static SupLength finite(std::size_t k) { return {false, k}; }
    static SupLength unbounded() { return {true, 0}; }

    bool operator==(const SupLength& o) const { return omega == o.omega && (omega || n == o.n); }
};

namespace detail {

struct GlushkovInfo {
    bool nullable = false;
    std::vector<std::size_t> first, last;  // position indices
};

/// Position automaton pieces; positions are leaf occurrences in left-to-right
/// order, each carrying one extended letter.
inline GlushkovInfo glushkov(const TermPtr& t, std::vector<ExtLetter>& positions,
                             std::vector<std::vector<std::size_t>>& follow) {
    GlushkovInfo info;
    switch (t->kind) {
        case TermKind::Zero:
            return info;
        case TermKind::One:
            info.nullable = true;
            return info;
        case TermKind::Var:
        case TermKind::CoVar:
        case TermKind::CoOne: {
            ExtLetter letter = t->kind == TermKind::Var    ? ExtLetter::pos(t->name)
                               : t->kind == TermKind::CoVar ? ExtLetter::neg(t->name)
                                                            : ExtLetter::not_one();
            std::size_t p = positions.size();
            positions.push_back(letter);
            follow.emplace_back();
            info.first = {p};
            info.last = {p};
            return info;
        }
        case TermKind::Plus: {
            GlushkovInfo a = glushkov(t->left, positions, follow);
            GlushkovInfo b = glushkov(t->right, positions, follow);
            info.nullable = a.nullable || b.nullable;
            info.first = a.first;
            info.first.insert(info.first.end(), b.first.begin(), b.first.end());
            info.last = a.last;
            info.last.insert(info.last.end(), b.last.begin(), b.last.end());
            return info;
        }
        case TermKind::Seq: {
            GlushkovInfo a = glushkov(t->left, positions, follow);
            GlushkovInfo b = glushkov(t->right, positions, follow);
            for (std::size_t p : a.last)
                for (std::size_t q : b.first) follow[p].push_back(q);
            info.nullable = a.nullable && b.nullable;
            info.first = a.first;
            if (a.nullable) info.first.insert(info.first.end(), b.first.begin(), b.first.end());
            info.last = b.last;
            if (b.nullable) info.last.insert(info.last.end(), a.last.begin(), a.last.end());
            return info;
        }
        case TermKind::Star: {
            GlushkovInfo a = glushkov(t->left, positions, follow);
            for (std::size_t p : a.last)
                for (std::size_t q : a.first) follow[p].push_back(q);
            info.nullable = true;
            info.first = a.first;
            info.last = a.last;
            return info;
        }
        case TermKind::Compl:
            throw FragmentError("full complement has no reading over the extended alphabet");
    }
    return info;
}

}  // namespace detail

/// Position automaton for the term read over the extended alphabet. The
/// alphabet lists the letters of the term in order of first occurrence.
inline Automaton ext_language(const TermPtr& t) {
    std::vector<ExtLetter> positions;
    std::vector<std::vector<std::size_t>> follow;
    detail::GlushkovInfo info = detail::glushkov(t, positions, follow);

    std::vector<std::string> letters;
    for (const auto& l : positions) {
        std::string tok = l.token();
        bool present = false;
        for (const auto& existing : letters) present = present || existing == tok;
        if (!present) letters.push_back(tok);
    }
    Alphabet alphabet(letters);

    Automaton a = Automaton::empty(alphabet);
    a.add_states(static_cast<State>(positions.size()) + 1);
    a.initial = {0};
    for (std::size_t p : info.first)
        a.add_transition(0, alphabet.index_of(positions[p].token()), static_cast<State>(p + 1));
    for (std::size_t p = 0; p < positions.size(); ++p)
        for (std::size_t q : follow[p])
            a.add_transition(static_cast<State>(p + 1), alphabet.index_of(positions[q].token()),
                             static_cast<State>(q + 1));
    for (std::size_t p : info.last) a.accepting.push_back(static_cast<State>(p + 1));
    if (info.nullable) a.accepting.push_back(0);
    detail::sort_unique(a.accepting);
    return a;
}

/// sup of the word lengths of the term's extended-alphabet language, with 0
/// for the empty language.
inline SupLength sup_length(const TermPtr& t) {
    Automaton a = trim(ext_language(t));
    if (a.num_states == 0) return SupLength::finite(0);
    // cycle detection + longest path over the trimmed DAG
    std::vector<int> color(a.num_states, 0);
    std::vector<long long> longest(a.num_states, -1);
    bool cyclic = false;
    auto dfs = [&](auto&& self, State s) -> long long {
        if (color[s] == 1) {
            cyclic = true;
            return 0;
        }
        if (color[s] == 2) return longest[s];
        color[s] = 1;
        long long best = a.is_accepting(s) ? 0 : -1;
        for (std::size_t l = 0; l < a.alphabet.size() && !cyclic; ++l) {
            for (State n : a.next[s][l]) {
                long long sub = self(self, n);
                if (cyclic) break;
                if (sub >= 0 && sub + 1 > best) best = sub + 1;
            }
        }
        color[s] = 2;
        longest[s] = best;
        return best;
    };
    long long best = 0;
    for (State s : a.initial) {
        long long d = dfs(dfs, s);
        if (cyclic) return SupLength::unbounded();
        if (d > best) best = d;
    }
    return SupLength::finite(static_cast<std::size_t>(best));
}

}  // namespace kacd

#endif  // KACD_TERM_HPP_
