#include "er2rel/text.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include <json.hpp>

namespace er2rel {

std::string to_string(const Diagnostic& d) {
  std::ostringstream out;
  if (d.span.line > 0) {
    out << d.span.line << ":" << d.span.column << ": ";
  }
  out << "error [" << d.code << "]: " << d.message;
  return out.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokenKind { Ident, Integer, LBrace, RBrace, LParen, RParen, Comma, Semi, End, Bad };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  Token next() {
    skip_trivia();
    Token tok;
    tok.span = SourceSpan{line_, column_};
    if (pos_ >= source_.size()) {
      tok.kind = TokenKind::End;
      return tok;
    }
    const char c = source_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < source_.size() && (std::isalnum(static_cast<unsigned char>(source_[pos_])) ||
                                       source_[pos_] == '_')) {
        advance();
      }
      tok.kind = TokenKind::Ident;
      tok.text = std::string(source_.substr(start, pos_ - start));
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_]))) {
        advance();
      }
      tok.kind = TokenKind::Integer;
      tok.text = std::string(source_.substr(start, pos_ - start));
      return tok;
    }
    tok.text = std::string(1, c);
    advance();
    switch (c) {
      case '{': tok.kind = TokenKind::LBrace; break;
      case '}': tok.kind = TokenKind::RBrace; break;
      case '(': tok.kind = TokenKind::LParen; break;
      case ')': tok.kind = TokenKind::RParen; break;
      case ',': tok.kind = TokenKind::Comma; break;
      case ';': tok.kind = TokenKind::Semi; break;
      default: tok.kind = TokenKind::Bad; break;
    }
    return tok;
  }

 private:
  void advance() {
    if (source_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < source_.size()) {
      const char c = source_[pos_];
      if (c == '#') {
        while (pos_ < source_.size() && source_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view source_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Source positions for semantic diagnostics
// ---------------------------------------------------------------------------

struct EntitySpans {
  std::string name;
  SourceSpan name_span;
  std::map<std::string, std::vector<SourceSpan>> attribute_spans;  // includes the key
};

struct RelationshipSpans {
  std::string name;
  SourceSpan name_span;
  std::string entity_name[2];  // indexed by side, 0 = left
  SourceSpan entity_span[2];
  SourceSpan min_span[2];
  SourceSpan max_span[2];
};

struct SpanIndex {
  std::vector<EntitySpans> entities;
  std::vector<RelationshipSpans> relationships;

  SourceSpan entity_name(const std::string& name, bool last) const {
    SourceSpan span;
    for (const auto& e : entities) {
      if (e.name != name) continue;
      span = e.name_span;
      if (!last) return span;
    }
    return span;
  }

  SourceSpan attribute(const std::string& entity, const std::string& attr) const {
    for (const auto& e : entities) {
      if (e.name != entity) continue;
      auto it = e.attribute_spans.find(attr);
      if (it != e.attribute_spans.end() && !it->second.empty()) return it->second.back();
    }
    return {};
  }

  const RelationshipSpans* relationship(const std::string& name, bool last) const {
    const RelationshipSpans* found = nullptr;
    for (const auto& r : relationships) {
      if (r.name != name) continue;
      found = &r;
      if (!last) return found;
    }
    return found;
  }
};

SourceSpan span_for(const SpanIndex& index, const Violation& v,
                    std::map<std::string, int>& unknown_entity_uses) {
  const auto side_index = [&](std::string_view detail) { return detail == "left" ? 0 : 1; };
  if (v.code == codes::kDuplicateEntity) return index.entity_name(v.element, /*last=*/true);
  if (v.code == codes::kDuplicateRelationship) {
    if (const auto* r = index.relationship(v.element, /*last=*/true)) return r->name_span;
    return {};
  }
  if (v.code == codes::kNameClash) {
    if (const auto* r = index.relationship(v.element, /*last=*/false)) return r->name_span;
    return {};
  }
  if (v.code == codes::kKeyInAttributes || v.code == codes::kDuplicateAttribute) {
    return index.attribute(v.element, v.detail);
  }
  if (v.code == codes::kUnknownEntity) {
    const auto* r = index.relationship(v.element, /*last=*/false);
    if (r == nullptr) return {};
    // Both sides may name the same unknown entity; attribute the n-th
    // violation to the n-th occurrence.
    int use = unknown_entity_uses[v.element + "\x1f" + v.detail]++;
    for (int s = 0; s < 2; ++s) {
      if (r->entity_name[s] != v.detail) continue;
      if (use == 0) return r->entity_span[s];
      --use;
    }
    return {};
  }
  if (v.code == codes::kSelfRelationship) {
    if (const auto* r = index.relationship(v.element, /*last=*/false)) return r->entity_span[1];
    return {};
  }
  if (v.code == codes::kMinUnbounded || v.code == codes::kMinExceedsMax) {
    if (const auto* r = index.relationship(v.element, /*last=*/false)) {
      return r->min_span[side_index(v.detail)];
    }
    return {};
  }
  if (v.code == codes::kMaxBelowOne) {
    if (const auto* r = index.relationship(v.element, /*last=*/false)) {
      return r->max_span[side_index(v.detail)];
    }
    return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view source) : lexer_(source) { shift(); }

  ParseResult run() {
    while (current_.kind != TokenKind::End) {
      if (at_keyword("entity")) {
        parse_entity();
      } else if (at_keyword("relationship")) {
        parse_relationship();
      } else {
        error("expected 'entity' or 'relationship'");
        shift();
        synchronize();
      }
    }

    ParseResult result;
    std::map<std::string, int> unknown_entity_uses;
    result.diagnostics = std::move(diagnostics_);
    for (const Violation& v : validate_model(model_)) {
      result.diagnostics.push_back(
          Diagnostic{v.code, span_for(spans_, v, unknown_entity_uses), v.message});
    }
    if (result.diagnostics.empty()) result.model = std::move(model_);
    return result;
  }

 private:
  bool at_keyword(std::string_view kw) const {
    return current_.kind == TokenKind::Ident && current_.text == kw;
  }

  void shift() { current_ = lexer_.next(); }

  void error(const std::string& message) {
    std::string shown = current_.kind == TokenKind::End
                            ? "end of input"
                            : "'" + current_.text + "'";
    diagnostics_.push_back(Diagnostic{std::string(codes::kSyntaxError), current_.span,
                                      message + ", found " + shown});
  }

  // Skips to the next plausible declaration boundary: consumes up to and
  // including ';', stops just before '}' or a declaration keyword.
  void synchronize() {
    while (current_.kind != TokenKind::End) {
      if (current_.kind == TokenKind::Semi) {
        shift();
        return;
      }
      if (current_.kind == TokenKind::RBrace) return;
      if (at_keyword("entity") || at_keyword("relationship")) return;
      shift();
    }
  }

  bool expect(TokenKind kind, const std::string& what) {
    if (current_.kind != kind) {
      error("expected " + what);
      return false;
    }
    shift();
    return true;
  }

  bool expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      error("expected '" + std::string(kw) + "'");
      return false;
    }
    shift();
    return true;
  }

  std::optional<std::string> expect_ident(const std::string& what, SourceSpan* span = nullptr) {
    if (current_.kind != TokenKind::Ident) {
      error("expected " + what);
      return std::nullopt;
    }
    std::string text = current_.text;
    if (span != nullptr) *span = current_.span;
    shift();
    return text;
  }

  void parse_entity() {
    shift();  // 'entity'
    EntitySpans spans;
    auto name = expect_ident("entity name", &spans.name_span);
    if (!name) {
      synchronize();
      return;
    }
    spans.name = *name;

    EntityType entity;
    entity.name = *name;
    if (!expect(TokenKind::LBrace, "'{'")) {
      synchronize();
      return;
    }

    int keys_seen = 0;
    while (current_.kind != TokenKind::RBrace && current_.kind != TokenKind::End &&
           !at_keyword("entity") && !at_keyword("relationship")) {
      const bool is_key = at_keyword("key");
      if (!is_key && !at_keyword("attr")) {
        error("expected 'key', 'attr' or '}'");
        shift();
        synchronize();
        continue;
      }
      shift();
      SourceSpan attr_span;
      auto attr = expect_ident("attribute name", &attr_span);
      if (!attr) {
        synchronize();
        continue;
      }
      if (!expect(TokenKind::Semi, "';'")) {
        synchronize();
      }
      spans.attribute_spans[*attr].push_back(attr_span);
      if (is_key) {
        ++keys_seen;
        if (keys_seen == 1) {
          entity.key_attribute = *attr;
        } else {
          diagnostics_.push_back(Diagnostic{std::string(codes::kSyntaxError), attr_span,
                                            "entity '" + entity.name +
                                                "' declares more than one key"});
        }
      } else {
        entity.attributes.push_back(*attr);
      }
    }
    if (current_.kind == TokenKind::RBrace) {
      shift();
    } else {
      error("expected '}'");
    }
    if (keys_seen == 0) {
      diagnostics_.push_back(Diagnostic{std::string(codes::kSyntaxError), spans.name_span,
                                        "entity '" + entity.name + "' declares no key"});
    }
    model_.entities.push_back(std::move(entity));
    spans_.entities.push_back(std::move(spans));
  }

  std::optional<Cardinality> parse_cardinality() {
    if (current_.kind == TokenKind::Integer) {
      Cardinality value = Cardinality::finite(0);
      try {
        value = Cardinality::finite(std::stoi(current_.text));
      } catch (const std::out_of_range&) {
        error("cardinality out of range");
        shift();
        return std::nullopt;
      }
      shift();
      return value;
    }
    if (at_keyword("N")) {
      shift();
      return Cardinality::unbounded();
    }
    error("expected a cardinality (integer or 'N')");
    return std::nullopt;
  }

  // '(' min <card> ',' max <card> ')'
  bool parse_constraint(StructuralConstraint& out, RelationshipSpans& spans, int side) {
    if (!expect(TokenKind::LParen, "'('")) return false;
    if (!expect_keyword("min")) return false;
    spans.min_span[side] = current_.span;
    auto min = parse_cardinality();
    if (!min) return false;
    if (!expect(TokenKind::Comma, "','")) return false;
    if (!expect_keyword("max")) return false;
    spans.max_span[side] = current_.span;
    auto max = parse_cardinality();
    if (!max) return false;
    if (!expect(TokenKind::RParen, "')'")) return false;
    out = StructuralConstraint{*min, *max};
    return true;
  }

  void parse_relationship() {
    shift();  // 'relationship'
    RelationshipSpans spans;
    auto name = expect_ident("relationship name", &spans.name_span);
    if (!name) {
      synchronize();
      return;
    }
    spans.name = *name;

    RelationshipType rel;
    rel.name = *name;
    bool ok = expect_keyword("between");
    if (ok) {
      auto left = expect_ident("entity name", &spans.entity_span[0]);
      ok = left.has_value();
      if (ok) rel.left_entity = spans.entity_name[0] = *left;
    }
    if (ok) ok = parse_constraint(rel.left_constraint, spans, 0);
    if (ok) ok = expect_keyword("and");
    if (ok) {
      auto right = expect_ident("entity name", &spans.entity_span[1]);
      ok = right.has_value();
      if (ok) rel.right_entity = spans.entity_name[1] = *right;
    }
    if (ok) ok = parse_constraint(rel.right_constraint, spans, 1);
    if (ok) ok = expect(TokenKind::Semi, "';'");
    if (!ok) {
      synchronize();
      return;
    }
    model_.relationships.push_back(std::move(rel));
    spans_.relationships.push_back(std::move(spans));
  }

  Lexer lexer_;
  Token current_;
  ErModel model_;
  SpanIndex spans_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

ParseResult parse_er(std::string_view source) { return Parser(source).run(); }

std::string render_er(const ErModel& model) {
  std::ostringstream out;
  bool first = true;
  for (const auto& entity : model.entities) {
    if (!first) out << "\n";
    first = false;
    out << "entity " << entity.name << " {\n";
    out << "  key " << entity.key_attribute << ";\n";
    for (const auto& attr : entity.attributes) {
      out << "  attr " << attr << ";\n";
    }
    out << "}\n";
  }
  for (const auto& rel : model.relationships) {
    if (!first) out << "\n";
    first = false;
    out << "relationship " << rel.name << " between " << rel.left_entity << " (min "
        << rel.left_constraint.min.to_string() << ", max " << rel.left_constraint.max.to_string()
        << ") and " << rel.right_entity << " (min " << rel.right_constraint.min.to_string()
        << ", max " << rel.right_constraint.max.to_string() << ");\n";
  }
  return out.str();
}

namespace {

std::string render_paper(const RelationalSchema& schema) {
  std::ostringstream out;
  for (const auto& rel : schema.relations) {
    out << rel.name << "[";
    bool first = true;
    for (const auto& col : rel.columns) {
      if (!first) out << ", ";
      first = false;
      out << col.name;
      if (rel.in_primary_key(col.name)) out << "*";
      if (const ForeignKey* fk = rel.foreign_key_for(col.name)) {
        out << "→" << fk->target_relation << "." << fk->target_column;
        if (fk->nullable) out << "?";
      }
    }
    out << "]\n";
  }
  return out.str();
}

std::string render_structured(const RelationalSchema& schema) {
  nlohmann::ordered_json doc;
  doc["relations"] = nlohmann::ordered_json::array();
  for (const auto& rel : schema.relations) {
    nlohmann::ordered_json r;
    r["name"] = rel.name;
    r["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : rel.columns) {
      r["columns"].push_back({{"name", col.name}, {"role", column_role_key(col.role)}});
    }
    r["primary_key"] = rel.primary_key;
    r["foreign_keys"] = nlohmann::ordered_json::array();
    for (const auto& fk : rel.foreign_keys) {
      r["foreign_keys"].push_back({{"column", fk.column},
                                   {"target_relation", fk.target_relation},
                                   {"target_column", fk.target_column},
                                   {"nullable", fk.nullable}});
    }
    doc["relations"].push_back(std::move(r));
  }
  doc["relationship_encodings"] = nlohmann::ordered_json::array();
  for (const auto& enc : schema.relationship_encodings) {
    doc["relationship_encodings"].push_back({{"relationship", enc.relationship},
                                             {"kind", encoding_kind_key(enc.kind)},
                                             {"relation", enc.relation}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render_rds(const RelationalSchema& schema, RdsFormat format) {
  return format == RdsFormat::Paper ? render_paper(schema) : render_structured(schema);
}

}  // namespace er2rel
