#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace css {

struct TaxonomyClass {
  std::string id;
  std::string parent;  ///< empty for the root
  std::string label;

  friend bool operator==(const TaxonomyClass&, const TaxonomyClass&) = default;
};

/// Capability class hierarchy. Closed world: siblings (and therefore all
/// non-ancestor/descendant pairs) are disjoint; a class subsumes its
/// descendants.
class Taxonomy {
 public:
  Taxonomy() = default;
  explicit Taxonomy(std::vector<TaxonomyClass> classes);

  const std::vector<TaxonomyClass>& classes() const noexcept { return classes_; }
  bool contains(std::string_view id) const;
  const TaxonomyClass* find(std::string_view id) const;

  /// Proper ancestors, nearest first. Stops on cycles.
  std::vector<std::string> ancestors(std::string_view id) const;

  /// a == b or b is an ancestor of a. Throws UnknownClass.
  bool is_subclass_of(std::string_view a, std::string_view b) const;

  /// Tree-shape defects: duplicate ids, dangling parents, cycles, root count.
  std::vector<std::string> structural_problems() const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) { return a.classes_ == b.classes_; }

 private:
  std::vector<TaxonomyClass> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline bool is_subclass_of(const Taxonomy& taxonomy, std::string_view a, std::string_view b) {
  return taxonomy.is_subclass_of(a, b);
}

}  // namespace css
