// OWL 2 functional-style syntax reader.
//
// The document is first read into a generic s-expression tree (name '(' args ')'),
// then interpreted. Anything outside the modelled subset becomes either an Opaque
// class expression or a ParseWarning, never a hard error.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqforge/core/ontology.hpp"

namespace cqforge {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

constexpr std::size_t kMaxNesting = 512;
const std::string kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
const std::string kOwlNs = "http://www.w3.org/2002/07/owl#";

enum class TokenType { LParen, RParen, Equals, FullIri, Name, Literal, End };

struct Token {
    TokenType type = TokenType::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) return tok;
        const char c = text_[pos_];
        if (c == '(') {
            advance();
            tok.type = TokenType::LParen;
            tok.text = "(";
        } else if (c == ')') {
            advance();
            tok.type = TokenType::RParen;
            tok.text = ")";
        } else if (c == '=') {
            advance();
            tok.type = TokenType::Equals;
            tok.text = "=";
        } else if (c == '<') {
            tok.type = TokenType::FullIri;
            tok.text = read_full_iri(tok);
        } else if (c == '"') {
            tok.type = TokenType::Literal;
            tok.text = read_literal(tok);
        } else {
            tok.type = TokenType::Name;
            while (pos_ < text_.size() && is_name_char(text_[pos_])) advance();
            tok.text = std::string(text_.substr(start_of(tok), pos_ - start_of(tok)));
            if (tok.text.empty()) {
                throw ParseError(tok.line, tok.column, std::string("unexpected character '") + c + "'");
            }
        }
        return tok;
    }

  private:
    static bool is_name_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '<' && c != '>' &&
               c != '"' && c != '=';
    }

    std::size_t start_of(const Token&) const { return tok_start_; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
        tok_start_ = pos_;
    }

    std::string read_full_iri(const Token& tok) {
        advance();
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '>') {
            if (text_[pos_] == '\n' || text_[pos_] == ' ') throw ParseError(tok.line, tok.column, "malformed IRI");
            out.push_back(text_[pos_]);
            advance();
        }
        if (pos_ >= text_.size()) throw ParseError(tok.line, tok.column, "unterminated IRI");
        advance();
        if (out.empty()) throw ParseError(tok.line, tok.column, "empty IRI");
        return out;
    }

    // Keeps the raw literal including quotes and any @lang / ^^datatype suffix.
    std::string read_literal(const Token& tok) {
        const std::size_t start = pos_;
        advance();
        bool closed = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                advance();
                advance();
                continue;
            }
            advance();
            if (c == '"') {
                closed = true;
                break;
            }
        }
        if (!closed) throw ParseError(tok.line, tok.column, "unterminated string literal");
        if (pos_ < text_.size() && text_[pos_] == '@') {
            while (pos_ < text_.size() && is_name_char(text_[pos_])) advance();
        } else if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
            advance();
            advance();
            if (pos_ < text_.size() && text_[pos_] == '<') {
                Token inner;
                inner.line = line_;
                inner.column = column_;
                read_full_iri(inner);
            } else {
                while (pos_ < text_.size() && is_name_char(text_[pos_])) advance();
            }
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t tok_start_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// A bare token, or a call `head(args...)`.
struct Sexp {
    Token token;
    bool is_call = false;
    std::vector<Sexp> args;

    const std::string& head() const { return token.text; }
};

class SexpReader {
  public:
    explicit SexpReader(std::string_view text) : lexer_(text) { lookahead_ = lexer_.next(); }

    bool at_end() const { return lookahead_.type == TokenType::End; }

    Sexp read(std::size_t nesting = 0) {
        if (nesting > kMaxNesting) {
            throw ParseError(lookahead_.line, lookahead_.column, "expression nesting too deep");
        }
        Token tok = take();
        switch (tok.type) {
            case TokenType::End: throw ParseError(tok.line, tok.column, "unexpected end of input");
            case TokenType::RParen: throw ParseError(tok.line, tok.column, "unexpected ')'");
            default: break;
        }
        Sexp node;
        node.token = tok;
        if (tok.type == TokenType::LParen) {
            // Bare group, as in HasKey(:C () (:p)). Head stays empty.
            node.token.text.clear();
            node.is_call = true;
            read_args(node, nesting);
        } else if (tok.type == TokenType::Name && lookahead_.type == TokenType::LParen) {
            node.is_call = true;
            take();
            read_args(node, nesting);
        }
        return node;
    }

  private:
    void read_args(Sexp& node, std::size_t nesting) {
        while (lookahead_.type != TokenType::RParen) {
            if (lookahead_.type == TokenType::End) {
                throw ParseError(node.token.line, node.token.column, "unclosed '(' for " + node.token.text);
            }
            node.args.push_back(read(nesting + 1));
        }
        take();
    }

    Token take() {
        Token t = std::move(lookahead_);
        lookahead_ = lexer_.next();
        return t;
    }

    Lexer lexer_;
    Token lookahead_;
};

std::string render(const Sexp& s) {
    std::string out = s.token.type == TokenType::FullIri ? "<" + s.token.text + ">" : s.token.text;
    if (s.is_call) {
        out += "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) {
            if (i) out += " ";
            out += render(s.args[i]);
        }
        out += ")";
    }
    return out;
}

std::string unquote_literal(const std::string& raw) {
    std::string out;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size()) {
            out.push_back(raw[++i]);
        } else if (raw[i] == '"') {
            break;
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

class Interpreter {
  public:
    Interpreter(std::string id) { onto_.id = std::move(id); onto_.prefixes = standard_prefixes(); }

    Ontology finish() {
        build_hierarchy();
        for (auto& term : onto_.terms) term.label = onto_.label_of(term.term);
        return std::move(onto_);
    }

    PrefixMap& prefixes() { return onto_.prefixes; }

    void document_item(const Sexp& s) {
        if (!s.is_call) throw ParseError(s.token.line, s.token.column, "expected Prefix(...) or Ontology(...)");
        if (s.head() == "Prefix") {
            prefix_decl(s);
        } else if (s.head() == "Ontology") {
            std::size_t i = 0;
            // Optional ontology IRI and version IRI.
            while (i < s.args.size() && !s.args[i].is_call && i < 2) ++i;
            for (; i < s.args.size(); ++i) ontology_item(s.args[i]);
        } else {
            throw ParseError(s.token.line, s.token.column, "unexpected top-level construct " + s.head());
        }
    }

    Iri resolve(const Sexp& s) const {
        if (s.is_call) throw ParseError(s.token.line, s.token.column, "expected IRI, found " + s.head() + "(...)");
        if (s.token.type == TokenType::FullIri) return Iri(s.token.text);
        if (s.token.type != TokenType::Name) throw ParseError(s.token.line, s.token.column, "expected IRI");
        const auto colon = s.token.text.find(':');
        if (colon == std::string::npos) {
            throw ParseError(s.token.line, s.token.column, "expected IRI, found '" + s.token.text + "'");
        }
        const std::string prefix = s.token.text.substr(0, colon);
        const auto it = onto_.prefixes.find(prefix);
        if (it == onto_.prefixes.end()) {
            throw ParseError(s.token.line, s.token.column, "undeclared prefix '" + prefix + ":'");
        }
        return Iri(it->second + s.token.text.substr(colon + 1));
    }

    ClassExpression expression(const Sexp& s) const {
        if (!s.is_call) return ClassExpression::named(resolve(s));
        const std::string& h = s.head();
        const auto& a = s.args;
        const bool plain_property = !a.empty() && !a[0].is_call;
        if ((h == "ObjectSomeValuesFrom" || h == "ObjectAllValuesFrom") && a.size() == 2 && plain_property) {
            Iri p = resolve(a[0]);
            ClassExpression filler = expression(a[1]);
            return h == "ObjectSomeValuesFrom" ? ClassExpression::some(std::move(p), std::move(filler))
                                               : ClassExpression::only(std::move(p), std::move(filler));
        }
        if (h == "ObjectIntersectionOf" || h == "ObjectUnionOf") {
            if (a.size() < 2) throw ParseError(s.token.line, s.token.column, h + " requires at least two operands");
            std::vector<ClassExpression> ops;
            for (const auto& arg : a) ops.push_back(expression(arg));
            return h == "ObjectIntersectionOf" ? ClassExpression::intersection(std::move(ops))
                                               : ClassExpression::union_of(std::move(ops));
        }
        if (h == "ObjectComplementOf") {
            if (a.size() != 1) throw ParseError(s.token.line, s.token.column, h + " takes one operand");
            return ClassExpression::complement(expression(a[0]));
        }
        if (h == "ObjectHasValue" && a.size() == 2 && plain_property && !a[1].is_call) {
            return ClassExpression::has_value(resolve(a[0]), resolve(a[1]));
        }
        check_prefixes(s);
        return ClassExpression::opaque(render(s));
    }

  private:
    // Opaque text keeps names as written; their prefixes must still exist.
    void check_prefixes(const Sexp& s) const {
        if (!s.is_call && s.token.type == TokenType::Name && s.token.text.find(':') != std::string::npos) {
            resolve(s);
        }
        for (const auto& arg : s.args) check_prefixes(arg);
    }

    void warn(const Sexp& s, std::string reason) {
        onto_.warnings.push_back({s.token.line, s.token.column, std::move(reason)});
    }

    void prefix_decl(const Sexp& s) {
        // Prefix(name:=<iri>) lexes as [Name "name:", Equals, FullIri].
        const auto& a = s.args;
        if (a.size() != 3 || a[0].is_call || a[1].token.type != TokenType::Equals ||
            a[2].token.type != TokenType::FullIri || a[0].token.text.empty() || a[0].token.text.back() != ':') {
            throw ParseError(s.token.line, s.token.column, "malformed Prefix declaration");
        }
        const std::string& name = a[0].token.text;
        onto_.prefixes[name.substr(0, name.size() - 1)] = a[2].token.text;
    }

    TermRecord& term(const Iri& iri, TermKind kind) {
        if (auto it = index_.find(iri); it != index_.end()) return onto_.terms[it->second];
        index_.emplace(iri, onto_.terms.size());
        TermRecord rec;
        rec.term = iri;
        rec.kind = kind;
        rec.ontology_id = onto_.id;
        onto_.terms.push_back(std::move(rec));
        return onto_.terms.back();
    }

    bool builtin(const Iri& iri) const { return iri.value.rfind(kOwlNs, 0) == 0; }

    void add(const Sexp& at, Axiom ax) {
        ax.source_span = SourceSpan{at.token.line, at.token.column};
        if (builtin(ax.subject)) {
            warn(at, "axiom on built-in entity " + ax.subject.value + " skipped");
            return;
        }
        TermRecord& rec = term(ax.subject, ax.subject_kind);
        ax.subject_kind = rec.kind;
        try {
            validate(ax);
        } catch (const std::invalid_argument& e) {
            warn(at, std::string("ill-typed axiom skipped: ") + e.what());
            return;
        }
        rec.axioms.push_back(std::move(ax));
    }

    void ontology_item(const Sexp& s) {
        if (!s.is_call) throw ParseError(s.token.line, s.token.column, "expected axiom, found '" + s.token.text + "'");
        const std::string& h = s.head();
        // Axiom annotations come first and carry no logical content.
        std::vector<const Sexp*> args;
        for (const auto& a : s.args) {
            if (a.is_call && a.head() == "Annotation") continue;
            args.push_back(&a);
        }

        if (h == "Declaration") return declaration(s, args);
        if (h == "Annotation") return;
        if (h == "AnnotationAssertion") return annotation_assertion(args);
        if (h == "Import") return warn(s, "Import not followed");

        if (h == "SubClassOf" && args.size() == 2) {
            if (args[0]->is_call) return warn(s, "general class inclusion skipped (complex subject)");
            Axiom ax;
            ax.subject = resolve(*args[0]);
            ax.relation = Relation::SubClassOf;
            ax.object = expression(*args[1]);
            return add(s, std::move(ax));
        }
        if ((h == "EquivalentClasses" || h == "DisjointClasses") && args.size() >= 2) {
            if (args[0]->is_call) return warn(s, h + " without a named first operand skipped");
            const Iri subject = resolve(*args[0]);
            for (std::size_t i = 1; i < args.size(); ++i) {
                Axiom ax;
                ax.subject = subject;
                ax.relation = h == "EquivalentClasses" ? Relation::EquivalentTo : Relation::DisjointWith;
                ax.object = expression(*args[i]);
                add(s, std::move(ax));
            }
            return;
        }
        if ((h == "ObjectPropertyDomain" || h == "ObjectPropertyRange" || h == "DataPropertyDomain" ||
             h == "DataPropertyRange") &&
            args.size() == 2) {
            if (args[0]->is_call) return warn(s, h + " on a property expression skipped");
            Axiom ax;
            ax.subject = resolve(*args[0]);
            ax.subject_kind = h.rfind("Object", 0) == 0 ? TermKind::ObjectProperty : TermKind::DataProperty;
            ax.relation = h.find("Domain") != std::string::npos ? Relation::Domain : Relation::Range;
            ax.object = expression(*args[1]);
            return add(s, std::move(ax));
        }
        if ((h == "SubObjectPropertyOf" || h == "SubDataPropertyOf" || h == "InverseObjectProperties") &&
            args.size() == 2) {
            if (args[0]->is_call || args[1]->is_call) return warn(s, h + " on a property expression or chain skipped");
            Axiom ax;
            ax.subject = resolve(*args[0]);
            ax.subject_kind = h == "SubDataPropertyOf" ? TermKind::DataProperty : TermKind::ObjectProperty;
            ax.relation = h == "InverseObjectProperties" ? Relation::InverseOf : Relation::SubPropertyOf;
            ax.object = resolve(*args[1]);
            return add(s, std::move(ax));
        }
        if (auto characteristic = characteristic_of(h); characteristic && args.size() == 1) {
            if (args[0]->is_call) return warn(s, h + " on a property expression skipped");
            Axiom ax;
            ax.subject = resolve(*args[0]);
            ax.subject_kind = h == "FunctionalDataProperty" ? TermKind::DataProperty : TermKind::ObjectProperty;
            ax.relation = Relation::Characteristic;
            ax.characteristic = *characteristic;
            return add(s, std::move(ax));
        }
        warn(s, "unsupported axiom kind " + h);
    }

    static std::optional<std::string> characteristic_of(const std::string& head) {
        static const char* const kNames[] = {"Functional", "InverseFunctional", "Reflexive", "Irreflexive",
                                             "Symmetric",  "Asymmetric",        "Transitive"};
        if (head == "FunctionalDataProperty") return "Functional";
        for (const char* name : kNames) {
            if (head == std::string(name) + "ObjectProperty") return name;
        }
        return std::nullopt;
    }

    void declaration(const Sexp& s, const std::vector<const Sexp*>& args) {
        if (args.size() != 1 || !args[0]->is_call || args[0]->args.size() != 1) {
            throw ParseError(s.token.line, s.token.column, "malformed Declaration");
        }
        const Sexp& inner = *args[0];
        const Iri iri = resolve(inner.args[0]);
        if (inner.head() == "Class") {
            if (!builtin(iri)) term(iri, TermKind::Class);
        } else if (inner.head() == "ObjectProperty") {
            if (!builtin(iri)) term(iri, TermKind::ObjectProperty);
        } else if (inner.head() == "DataProperty") {
            if (!builtin(iri)) term(iri, TermKind::DataProperty);
        } else if (inner.head() != "NamedIndividual" && inner.head() != "AnnotationProperty" &&
                   inner.head() != "Datatype") {
            throw ParseError(inner.token.line, inner.token.column, "unknown entity type " + inner.head());
        }
    }

    void annotation_assertion(const std::vector<const Sexp*>& args) {
        if (args.size() != 3 || args[1]->is_call || args[1]->token.type == TokenType::Literal) return;
        const Iri property = resolve(*args[0]);
        if (property.value != kRdfsLabel || args[2]->token.type != TokenType::Literal) return;
        const Iri subject = resolve(*args[1]);
        onto_.labels.emplace(subject, unquote_literal(args[2]->token.text));
    }

    void build_hierarchy() {
        for (const auto& rec : onto_.terms) {
            for (const auto& ax : rec.axioms) {
                const Iri* parent = nullptr;
                if (ax.relation == Relation::SubClassOf && ax.expression()->kind == ExpressionKind::Named) {
                    parent = &ax.expression()->iri;
                } else if (ax.relation == Relation::SubPropertyOf) {
                    parent = ax.object_iri();
                }
                if (parent == nullptr) continue;
                onto_.hierarchy[rec.term].parents.insert(*parent);
                onto_.hierarchy[*parent].children.insert(rec.term);
            }
        }
    }

    Ontology onto_;
    std::map<Iri, std::size_t> index_;
};

}  // namespace

const TermRecord* Ontology::find(const Iri& iri) const {
    auto it = std::find_if(terms.begin(), terms.end(), [&](const TermRecord& t) { return t.term == iri; });
    return it == terms.end() ? nullptr : &*it;
}

std::string Ontology::label_of(const Iri& iri) const {
    if (auto it = labels.find(iri); it != labels.end() && !it->second.empty()) return it->second;
    return local_name(iri);
}

Ontology parse_ontology(std::string_view text, const std::string& ontology_id) {
    SexpReader reader(text);
    Interpreter interp(ontology_id);
    while (!reader.at_end()) interp.document_item(reader.read());
    return interp.finish();
}

ClassExpression parse_class_expression(std::string_view text, const PrefixMap& prefixes) {
    SexpReader reader(text);
    Interpreter interp("");
    for (const auto& [name, ns] : prefixes) interp.prefixes()[name] = ns;
    const Sexp s = reader.read();
    if (!reader.at_end()) throw ParseError(1, 1, "trailing input after class expression");
    return interp.expression(s);
}

}  // namespace cqforge
