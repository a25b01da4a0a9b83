#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace edgeids {

/// Classification heads. Numeric values match the model file format.
enum class Target : std::uint8_t { Attack = 1, Category = 2, Subcategory = 3 };

enum class Category : std::uint8_t {
  Normal = 0,
  DoS = 1,
  Reconnaissance = 2,
  Theft = 3,
};

enum class Subcategory : std::uint8_t {
  Normal = 0,
  DoS_TCP = 1,
  DoS_HTTP = 2,
  Recon_ServiceScan = 3,
  Recon_OSFingerprint = 4,
  Theft_Keylogging = 5,
  Theft_DataExfiltration = 6,
};

inline constexpr int kCategoryCount = 4;
inline constexpr int kSubcategoryCount = 7;

constexpr int class_count(Target t) {
  switch (t) {
    case Target::Attack: return 2;
    case Target::Category: return kCategoryCount;
    case Target::Subcategory: return kSubcategoryCount;
  }
  return 0;
}

constexpr Category parent_category(Subcategory s) {
  switch (s) {
    case Subcategory::Normal: return Category::Normal;
    case Subcategory::DoS_TCP:
    case Subcategory::DoS_HTTP: return Category::DoS;
    case Subcategory::Recon_ServiceScan:
    case Subcategory::Recon_OSFingerprint: return Category::Reconnaissance;
    case Subcategory::Theft_Keylogging:
    case Subcategory::Theft_DataExfiltration: return Category::Theft;
  }
  return Category::Normal;
}

/// (attack, category, subcategory) for one flow record. The three values are
/// hierarchically consistent: attack=0 iff category=Normal iff
/// subcategory=Normal, and each subcategory maps to its parent category.
struct LabelTriple {
  std::uint8_t attack = 0;      // 0 = normal, 1 = attack
  std::uint8_t category = 0;    // Category
  std::uint8_t subcategory = 0; // Subcategory

  static LabelTriple from_subcategory(Subcategory s) {
    LabelTriple t;
    t.subcategory = static_cast<std::uint8_t>(s);
    t.category = static_cast<std::uint8_t>(parent_category(s));
    t.attack = (s == Subcategory::Normal) ? 0 : 1;
    return t;
  }

  bool consistent() const {
    if (attack > 1 || category >= kCategoryCount || subcategory >= kSubcategoryCount)
      return false;
    const auto sub = static_cast<Subcategory>(subcategory);
    if (static_cast<std::uint8_t>(parent_category(sub)) != category) return false;
    const bool normal = sub == Subcategory::Normal;
    return attack == (normal ? 0 : 1);
  }

  int value_for(Target t) const {
    switch (t) {
      case Target::Attack: return attack;
      case Target::Category: return category;
      case Target::Subcategory: return subcategory;
    }
    return 0;
  }

  bool operator==(const LabelTriple&) const = default;
};

const std::string& target_name(Target t);
const std::string& category_name(Category c);
const std::string& subcategory_name(Subcategory s);

std::optional<Target> target_from_name(std::string_view name);

/// Case-insensitive lookup of the canonical enum names.
std::optional<Category> category_from_name(std::string_view name);
std::optional<Subcategory> subcategory_from_name(std::string_view name);

} // namespace edgeids
