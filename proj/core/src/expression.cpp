#include "css/expression.hpp"

#include <cctype>

namespace css {
namespace {

bool is_plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return s != "and" && s != "in" && s != "true" && s != "false";
}

std::string render(const Quantity& q) {
  std::string text;
  if (q.value.type() == Datatype::Enum && !is_plain_identifier(q.value.symbol())) {
    text = "\"";
    for (char c : q.value.symbol()) {
      if (c == '"' || c == '\\') text.push_back('\\');
      text.push_back(c);
    }
    text += "\"";
  } else {
    text = q.value.to_string();
  }
  if (q.unit) text += " " + *q.unit;
  return text;
}

}  // namespace

std::string_view to_string(Comparator cmp) {
  switch (cmp) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Equal: return "=";
    case Comparator::NotEqual: return "!=";
    case Comparator::In: return "in";
  }
  return "?";
}

std::string to_string(const Atom& atom) {
  std::string text = atom.propertyId + " " + std::string(to_string(atom.comparator)) + " ";
  if (atom.comparator == Comparator::In) {
    text += "{";
    for (std::size_t i = 0; i < atom.operands.size(); ++i) {
      if (i > 0) text += ", ";
      text += render(atom.operands[i]);
    }
    text += "}";
  } else if (!atom.operands.empty()) {
    text += render(atom.operands.front());
  }
  return text;
}

std::string to_string(const CapabilityExpression& expr) {
  std::string text = expr.classId;
  for (const auto& atom : expr.constraints) text += " and (" + to_string(atom) + ")";
  return text;
}

}  // namespace css
