#include "css/taxonomy.hpp"

#include <set>

#include "css/error.hpp"

namespace css {

Taxonomy::Taxonomy(std::vector<TaxonomyClass> classes) : classes_(std::move(classes)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) index_.try_emplace(classes_[i].id, i);
}

bool Taxonomy::contains(std::string_view id) const { return find(id) != nullptr; }

const TaxonomyClass* Taxonomy::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &classes_[it->second];
}

std::vector<std::string> Taxonomy::ancestors(std::string_view id) const {
  std::vector<std::string> out;
  const TaxonomyClass* cls = find(id);
  while (cls && !cls->parent.empty() && out.size() < classes_.size()) {
    out.push_back(cls->parent);
    cls = find(cls->parent);
  }
  return out;
}

bool Taxonomy::is_subclass_of(std::string_view a, std::string_view b) const {
  if (!contains(a)) throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(a) + "'");
  if (!contains(b)) throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(b) + "'");
  if (a == b) return true;
  for (const auto& ancestor : ancestors(a)) {
    if (ancestor == b) return true;
  }
  return false;
}

std::vector<std::string> Taxonomy::structural_problems() const {
  std::vector<std::string> problems;
  std::set<std::string> seen;
  std::size_t roots = 0;
  for (const auto& cls : classes_) {
    if (cls.id.empty()) problems.push_back("class with empty id");
    if (!seen.insert(cls.id).second) problems.push_back("duplicate class id '" + cls.id + "'");
    if (cls.parent.empty()) {
      ++roots;
    } else if (!contains(cls.parent)) {
      problems.push_back("class '" + cls.id + "' has unknown parent '" + cls.parent + "'");
    }
  }
  if (!classes_.empty() && roots != 1) {
    problems.push_back("taxonomy must have exactly one root, found " + std::to_string(roots));
  }
  if (classes_.empty()) problems.push_back("taxonomy has no classes");
  for (const auto& cls : classes_) {
    // A chain longer than the class count can only come from a cycle.
    std::size_t steps = 0;
    const TaxonomyClass* cur = &cls;
    while (cur && !cur->parent.empty() && steps <= classes_.size()) {
      cur = find(cur->parent);
      ++steps;
    }
    if (steps > classes_.size()) problems.push_back("class '" + cls.id + "' is on a parent cycle");
  }
  return problems;
}

}  // namespace css
