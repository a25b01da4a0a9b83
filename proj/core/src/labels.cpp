#include "edgeids/labels.hpp"

#include <algorithm>
#include <cctype>

namespace edgeids {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::array<std::string, 3> kTargetNames = {"attack", "category", "subcategory"};

const std::array<std::string, kCategoryCount> kCategoryNames = {
    "Normal", "DoS", "Reconnaissance", "Theft"};

const std::array<std::string, kSubcategoryCount> kSubcategoryNames = {
    "Normal",
    "DoS_TCP",
    "DoS_HTTP",
    "Recon_ServiceScan",
    "Recon_OSFingerprint",
    "Theft_Keylogging",
    "Theft_DataExfiltration"};

} // namespace

const std::string& target_name(Target t) {
  return kTargetNames[static_cast<int>(t) - 1];
}

const std::string& category_name(Category c) {
  return kCategoryNames[static_cast<int>(c)];
}

const std::string& subcategory_name(Subcategory s) {
  return kSubcategoryNames[static_cast<int>(s)];
}

std::optional<Target> target_from_name(std::string_view name) {
  const std::string n = lower(name);
  for (int i = 0; i < 3; ++i)
    if (n == kTargetNames[i]) return static_cast<Target>(i + 1);
  return std::nullopt;
}

std::optional<Category> category_from_name(std::string_view name) {
  const std::string n = lower(name);
  for (int i = 0; i < kCategoryCount; ++i)
    if (n == lower(kCategoryNames[i])) return static_cast<Category>(i);
  return std::nullopt;
}

std::optional<Subcategory> subcategory_from_name(std::string_view name) {
  const std::string n = lower(name);
  for (int i = 0; i < kSubcategoryCount; ++i)
    if (n == lower(kSubcategoryNames[i])) return static_cast<Subcategory>(i);
  return std::nullopt;
}

} // namespace edgeids
