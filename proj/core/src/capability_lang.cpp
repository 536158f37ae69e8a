#include "css/capability_lang.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace css {
namespace {

enum class Tok { Ident, Number, String, LParen, RParen, LBrace, RBrace, Comma, Cmp, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, "", start};
    char c = src_[pos_];
    auto single = [&](Tok kind) {
      ++pos_;
      return Token{kind, std::string(1, c), start};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case ',': return single(Tok::Comma);
      case '<':
      case '>':
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '=') {
          ++pos_;
          return {Tok::Cmp, std::string{c, '='}, start};
        }
        return {Tok::Cmp, std::string(1, c), start};
      case '=': return single(Tok::Cmp);
      case '!':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
          pos_ += 2;
          return {Tok::Cmp, "!=", start};
        }
        break;
      case '"': return string_token(start);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
         (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '.'))) {
      ++pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        ++pos_;
      }
      return {Tok::Number, std::string(src_.substr(start, pos_ - start)), start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      ++pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_' || src_[pos_] == '-' || src_[pos_] == '.')) {
        ++pos_;
      }
      return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), start};
    }
    throw SyntaxError(start, {"identifier", "number", "comparator", "'('", "')'"},
                      std::string(1, c));
  }

 private:
  Token string_token(std::size_t start) {
    ++pos_;
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      value.push_back(src_[pos_++]);
    }
    if (pos_ >= src_.size()) throw SyntaxError(pos_, {"'\"'"}, "");
    ++pos_;
    return {Tok::String, value, start};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::optional<Comparator> comparator_from(std::string_view text) {
  if (text == "<") return Comparator::Less;
  if (text == "<=") return Comparator::LessEqual;
  if (text == ">") return Comparator::Greater;
  if (text == ">=") return Comparator::GreaterEqual;
  if (text == "=") return Comparator::Equal;
  if (text == "!=") return Comparator::NotEqual;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const WorldModel& world) : lexer_(text), world_(world) {
    advance();
  }

  CapabilityExpression parse() {
    CapabilityExpression expr;
    Token cls = expect(Tok::Ident, "class name");
    if (!world_.taxonomy.contains(cls.text)) {
      throw Error(ErrorCode::UnknownClass, "unknown class '" + cls.text + "'");
    }
    expr.classId = cls.text;
    while (cur_.kind != Tok::End) {
      if (cur_.kind != Tok::Ident || cur_.text != "and") {
        throw SyntaxError(cur_.pos, {"'and'", "end of input"}, cur_.text);
      }
      advance();
      expect(Tok::LParen, "'('");
      expr.constraints.push_back(atom());
      expect(Tok::RParen, "')'");
    }
    return expr;
  }

 private:
  Atom atom() {
    Token prop = expect(Tok::Ident, "property name");
    const PropertyDefinition* def = world_.find_property(prop.text);
    if (!def) throw Error(ErrorCode::UnknownProperty, "unknown property '" + prop.text + "'");
    Atom atom;
    atom.propertyId = prop.text;
    if (cur_.kind == Tok::Ident && cur_.text == "in") {
      atom.comparator = Comparator::In;
      advance();
      expect(Tok::LBrace, "'{'");
      if (cur_.kind != Tok::RBrace) {
        atom.operands.push_back(operand(*def));
        while (cur_.kind == Tok::Comma) {
          advance();
          atom.operands.push_back(operand(*def));
        }
      }
      expect(Tok::RBrace, "'}'");
      return atom;
    }
    if (cur_.kind != Tok::Cmp) {
      throw SyntaxError(cur_.pos, {"comparator", "'in'"}, cur_.text);
    }
    atom.comparator = *comparator_from(cur_.text);
    advance();
    atom.operands.push_back(operand(*def));
    return atom;
  }

  Quantity operand(const PropertyDefinition& def) {
    Token tok = cur_;
    if (tok.kind != Tok::Number && tok.kind != Tok::Ident && tok.kind != Tok::String) {
      throw SyntaxError(tok.pos, {"literal"}, tok.text);
    }
    advance();
    Quantity q{literal_for(tok, def), std::nullopt};
    if (tok.kind == Tok::Number && cur_.kind == Tok::Ident && cur_.text != "and" &&
        cur_.text != "in") {
      q.unit = cur_.text;
      advance();
    }
    return q;
  }

  Literal literal_for(const Token& tok, const PropertyDefinition& def) {
    auto mismatch = [&] {
      return Error(ErrorCode::TypeMismatch, "literal '" + tok.text + "' is not a valid " +
                                                std::string(to_string(def.datatype)) +
                                                " value for property '" + def.id + "'");
    };
    switch (def.datatype) {
      case Datatype::Integer:
      case Datatype::Real: {
        if (tok.kind != Tok::Number) throw mismatch();
        auto value = Decimal::try_parse(tok.text);
        if (!value) throw SyntaxError(tok.pos, {"number"}, tok.text);
        return tok.text.find('.') == std::string::npos ? Literal::integer(*value)
                                                       : Literal::real(*value);
      }
      case Datatype::Enum:
        return Literal::symbol(tok.text);
      case Datatype::Boolean:
        if (tok.kind == Tok::Ident && (tok.text == "true" || tok.text == "false")) {
          return Literal::boolean(tok.text == "true");
        }
        throw mismatch();
    }
    throw mismatch();
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw SyntaxError(cur_.pos, {what}, cur_.text);
    Token tok = cur_;
    advance();
    return tok;
  }

  void advance() { cur_ = lexer_.next(); }

  Lexer lexer_;
  const WorldModel& world_;
  Token cur_{Tok::End, "", 0};
};

FeasibleSet full_domain(const PropertyDefinition& def) {
  switch (def.datatype) {
    case Datatype::Integer: return FeasibleSet::full_numeric(true);
    case Datatype::Real: return FeasibleSet::full_numeric(false);
    case Datatype::Enum:
      return FeasibleSet::symbols(std::set<std::string>(def.enumValues.begin(), def.enumValues.end()));
    case Datatype::Boolean: return FeasibleSet::symbols({"false", "true"});
  }
  return FeasibleSet::full_numeric(false);
}

std::string symbol_of(const Literal& lit) {
  return lit.type() == Datatype::Boolean ? (lit.flag() ? "true" : "false") : lit.symbol();
}

FeasibleSet atom_set(const Atom& atom, const PropertyDefinition& def) {
  if (is_numeric(def.datatype)) {
    bool integral = def.datatype == Datatype::Integer;
    std::set<Decimal> values;
    for (const auto& op : atom.operands) values.insert(operand_in_property_unit(op, def));
    auto v = values.empty() ? Decimal{} : *values.begin();
    auto none = Bound::unbounded();
    switch (atom.comparator) {
      case Comparator::Less: return FeasibleSet::interval(integral, none, Bound::exclusive(v));
      case Comparator::LessEqual: return FeasibleSet::interval(integral, none, Bound::closed(v));
      case Comparator::Greater: return FeasibleSet::interval(integral, Bound::exclusive(v), none);
      case Comparator::GreaterEqual: return FeasibleSet::interval(integral, Bound::closed(v), none);
      case Comparator::Equal:
        return FeasibleSet::interval(integral, Bound::closed(v), Bound::closed(v));
      case Comparator::NotEqual: return FeasibleSet::interval(integral, none, none, {v});
      case Comparator::In: return FeasibleSet::points(integral, std::move(values));
    }
  }
  std::set<std::string> values;
  for (const auto& op : atom.operands) values.insert(symbol_of(op.value));
  if (atom.comparator == Comparator::NotEqual) {
    std::set<std::string> rest = full_domain(def).symbol_values();
    for (const auto& v : values) rest.erase(v);
    return FeasibleSet::symbols(std::move(rest));
  }
  return FeasibleSet::symbols(std::move(values));
}

bool compare(Comparator cmp, const Decimal& lhs, const Decimal& rhs) {
  switch (cmp) {
    case Comparator::Less: return lhs < rhs;
    case Comparator::LessEqual: return lhs <= rhs;
    case Comparator::Greater: return lhs > rhs;
    case Comparator::GreaterEqual: return lhs >= rhs;
    case Comparator::Equal:
    case Comparator::In: return lhs == rhs;
    case Comparator::NotEqual: return lhs != rhs;
  }
  return false;
}

std::vector<Quantity> operands_for(const std::set<Decimal>& values, const PropertyDefinition& def) {
  std::vector<Quantity> out;
  for (const auto& v : values) {
    out.push_back({def.datatype == Datatype::Integer ? Literal::integer(v) : Literal::real(v), def.unit});
  }
  return out;
}

}  // namespace

CapabilityExpression parse_expression(std::string_view text, const WorldModel& world) {
  CapabilityExpression expr = Parser(text, world).parse();
  require_valid(expr, world);
  return expr;
}

std::vector<ExpressionProblem> check_expression(const CapabilityExpression& expr,
                                                const WorldModel& world) {
  std::vector<ExpressionProblem> problems;
  if (!world.taxonomy.contains(expr.classId)) {
    problems.push_back({ErrorCode::UnknownClass, "unknown class '" + expr.classId + "'"});
  }
  for (const auto& atom : expr.constraints) {
    const PropertyDefinition* def = world.find_property(atom.propertyId);
    if (!def) {
      problems.push_back({ErrorCode::UnknownProperty, "unknown property '" + atom.propertyId + "'"});
      continue;
    }
    const std::string where = " in constraint '" + to_string(atom) + "'";
    if (!is_numeric(def->datatype) && atom.comparator != Comparator::In &&
        atom.comparator != Comparator::Equal && atom.comparator != Comparator::NotEqual) {
      problems.push_back({ErrorCode::TypeMismatch, "comparator '" +
                                                       std::string(to_string(atom.comparator)) +
                                                       "' is not defined for " +
                                                       std::string(to_string(def->datatype)) +
                                                       " property '" + def->id + "'"});
    }
    if (atom.comparator != Comparator::In && atom.operands.size() != 1) {
      problems.push_back({ErrorCode::TypeMismatch, "comparator needs exactly one operand" + where});
    }
    for (const auto& op : atom.operands) {
      bool type_ok = false;
      switch (def->datatype) {
        case Datatype::Integer:
        case Datatype::Real: type_ok = op.value.is_numeric(); break;
        case Datatype::Enum:
          type_ok = op.value.type() == Datatype::Enum &&
                    std::find(def->enumValues.begin(), def->enumValues.end(),
                              op.value.symbol()) != def->enumValues.end();
          break;
        case Datatype::Boolean: type_ok = op.value.type() == Datatype::Boolean; break;
      }
      if (!type_ok) {
        problems.push_back({ErrorCode::TypeMismatch, "literal '" + op.value.to_string() +
                                                         "' is not a valid " +
                                                         std::string(to_string(def->datatype)) +
                                                         " value" + where});
      }
      if (!op.unit) continue;
      if (!find_unit(*op.unit)) {
        problems.push_back({ErrorCode::UnknownUnit, "unknown unit '" + *op.unit + "'" + where});
      } else if (!is_numeric(def->datatype) || !def->unit) {
        problems.push_back({ErrorCode::UnitMismatch, "property '" + def->id +
                                                         "' has no unit but '" + *op.unit +
                                                         "' was given" + where});
      } else if (!same_dimension(*op.unit, *def->unit)) {
        problems.push_back({ErrorCode::UnitMismatch, "unit '" + *op.unit +
                                                         "' does not match property unit '" +
                                                         *def->unit + "'" + where});
      }
    }
  }
  return problems;
}

void require_valid(const CapabilityExpression& expr, const WorldModel& world) {
  auto problems = check_expression(expr, world);
  if (!problems.empty()) throw Error(problems.front().code, problems.front().message);
}

Decimal operand_in_property_unit(const Quantity& operand, const PropertyDefinition& def) {
  const Decimal& value = operand.value.number();
  if (!operand.unit || !def.unit) return value;
  return convert_unit(value, *operand.unit, *def.unit);
}

NormalForm normalize(const CapabilityExpression& expr, const WorldModel& world) {
  NormalForm nf;
  nf.classId = expr.classId;
  for (const auto& atom : expr.constraints) {
    const PropertyDefinition* def = world.find_property(atom.propertyId);
    if (!def) throw Error(ErrorCode::UnknownProperty, "unknown property '" + atom.propertyId + "'");
    auto it = nf.feasible.find(atom.propertyId);
    if (it == nf.feasible.end()) it = nf.feasible.emplace(atom.propertyId, full_domain(*def)).first;
    it->second = it->second.intersect(atom_set(atom, *def));
  }
  // Vacuous constraints carry no information; absent means full domain.
  for (auto it = nf.feasible.begin(); it != nf.feasible.end();) {
    const PropertyDefinition* def = world.find_property(it->first);
    if (it->second == full_domain(*def)) {
      it = nf.feasible.erase(it);
    } else {
      ++it;
    }
  }
  return nf;
}

CapabilityExpression to_expression(const NormalForm& nf, const WorldModel& world) {
  CapabilityExpression expr;
  expr.classId = nf.classId;
  for (const auto& [prop, set] : nf.feasible) {
    const PropertyDefinition* def = world.find_property(prop);
    if (!def) throw Error(ErrorCode::UnknownProperty, "unknown property '" + prop + "'");
    switch (set.kind()) {
      case FeasibleSet::Kind::Symbols: {
        Atom atom{prop, Comparator::In, {}};
        for (const auto& s : set.symbol_values()) {
          atom.operands.push_back({def->datatype == Datatype::Boolean ? Literal::boolean(s == "true")
                                                                      : Literal::symbol(s),
                                   std::nullopt});
        }
        expr.constraints.push_back(std::move(atom));
        break;
      }
      case FeasibleSet::Kind::Points:
        expr.constraints.push_back({prop, Comparator::In, operands_for(set.point_values(), *def)});
        break;
      case FeasibleSet::Kind::Interval: {
        if (const auto& lo = set.lower(); lo.value) {
          expr.constraints.push_back({prop, lo.open ? Comparator::Greater : Comparator::GreaterEqual,
                                      operands_for({*lo.value}, *def)});
        }
        if (const auto& hi = set.upper(); hi.value) {
          expr.constraints.push_back({prop, hi.open ? Comparator::Less : Comparator::LessEqual,
                                      operands_for({*hi.value}, *def)});
        }
        for (const auto& e : set.excluded()) {
          expr.constraints.push_back({prop, Comparator::NotEqual, operands_for({e}, *def)});
        }
        break;
      }
    }
  }
  return expr;
}

bool evaluate_atoms(const CapabilityExpression& expr, const ParameterMap& values,
                    const WorldModel& world) {
  for (const auto& atom : expr.constraints) {
    auto it = values.find(atom.propertyId);
    if (it == values.end()) return false;
    const PropertyDefinition* def = world.find_property(atom.propertyId);
    if (!def) return false;
    const Literal& value = it->second;
    bool ok;
    if (is_numeric(def->datatype)) {
      if (!value.is_numeric()) return false;
      if (atom.comparator == Comparator::In) {
        ok = false;
        for (const auto& op : atom.operands) {
          ok = ok || value.number() == operand_in_property_unit(op, *def);
        }
      } else {
        ok = compare(atom.comparator, value.number(), operand_in_property_unit(atom.operands.at(0), *def));
      }
    } else {
      if (value.type() != def->datatype) return false;
      bool any = false;
      for (const auto& op : atom.operands) any = any || op.value == value;
      ok = atom.comparator == Comparator::NotEqual ? !any : any;
    }
    if (!ok) return false;
  }
  return true;
}

std::string to_string(const NormalForm& nf) {
  std::string out = nf.classId;
  bool first = true;
  for (const auto& [prop, set] : nf.feasible) {
    out += first ? " where " : ", ";
    out += prop + " in " + set.to_string();
    first = false;
  }
  return out;
}

}  // namespace css
