#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fairsub/errors.hpp"

namespace fairsub {

/// Message tag. Names start with a lowercase letter followed by letters,
/// digits or underscores and compare by exact string equality.
class Tag {
 public:
  Tag() = default;
  explicit Tag(std::string name) : name_(std::move(name)) {
    if (!valid(name_)) throw Error("invalid tag name '" + name_ + "'");
  }

  static bool valid(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) return false;
    }
    return s != "end";
  }

  const std::string& str() const { return name_; }

  friend auto operator<=>(const Tag&, const Tag&) = default;
  friend bool operator==(const Tag&, const Tag&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Tag& t) { return os << t.name_; }

 private:
  std::string name_;
};

// Output sorts before input, mirroring the ASCII order of '!' and '?'.
enum class Polarity : unsigned char { Output = 0, Input = 1 };

constexpr Polarity dual(Polarity p) {
  return p == Polarity::Input ? Polarity::Output : Polarity::Input;
}

constexpr char symbol(Polarity p) { return p == Polarity::Input ? '?' : '!'; }

struct Label {
  Polarity polarity = Polarity::Output;
  Tag tag;

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

inline Label dual(const Label& l) { return Label{dual(l.polarity), l.tag}; }

inline Label out(const std::string& tag) { return Label{Polarity::Output, Tag(tag)}; }
inline Label in(const std::string& tag) { return Label{Polarity::Input, Tag(tag)}; }

inline std::string to_string(const Label& l) { return std::string(1, symbol(l.polarity)) + l.tag.str(); }

inline std::ostream& operator<<(std::ostream& os, const Label& l) { return os << to_string(l); }

using LabelWord = std::vector<Label>;

inline LabelWord dual(const LabelWord& w) {
  LabelWord r;
  r.reserve(w.size());
  for (const auto& l : w) r.push_back(dual(l));
  return r;
}

inline std::string to_string(const LabelWord& w) {
  if (w.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += to_string(w[i]);
  }
  return s;
}

/// Parses "?req !resp" (whitespace or '.' separated); "ε" or "" is the empty word.
inline LabelWord parse_word(std::string_view text) {
  LabelWord w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '.' || text[i] == '\t' || text[i] == ',')) ++i;
  };
  skip();
  if (text.substr(i) == "ε") return w;
  while (i < text.size()) {
    char p = text[i];
    if (p != '!' && p != '?') throw Error("label must start with '!' or '?' in '" + std::string(text) + "'");
    ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '.' && text[i] != '\t' && text[i] != ',') ++i;
    w.push_back(Label{p == '?' ? Polarity::Input : Polarity::Output, Tag(std::string(text.substr(start, i - start)))});
    skip();
  }
  return w;
}

}  // namespace fairsub

template <>
struct std::hash<fairsub::Tag> {
  std::size_t operator()(const fairsub::Tag& t) const noexcept { return std::hash<std::string>{}(t.str()); }
};
