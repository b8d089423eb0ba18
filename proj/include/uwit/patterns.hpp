#pragma once

#include <cstdint>
#include <vector>

namespace uwit {

/// Deterministic detector responses for one hidden-variable value: one bit
/// per measurement setting, Alice's settings first, then Bob's. Bit k of the
/// integer code is tuple position k, so code = sum_k bits[k] << k.
class ClickPattern {
 public:
  explicit ClickPattern(int code, int settings_per_party = 3);
  static ClickPattern from_bits(const std::vector<int>& bits);

  int code() const { return code_; }
  int settings_per_party() const { return settings_; }

  /// Response bit at tuple position k (0-based).
  bool bit(int k) const { return (code_ >> k) & 1; }
  /// true iff Alice's detector clicks for setting i in 1..settings.
  bool alice_clicks(int i) const { return bit(i - 1); }
  /// true iff Bob's detector clicks for setting j in 1..settings.
  bool bob_clicks(int j) const { return bit(settings_ + j - 1); }

  std::vector<int> bits() const;

  bool operator==(const ClickPattern& o) const { return code_ == o.code_; }
  bool operator<(const ClickPattern& o) const { return code_ < o.code_; }

 private:
  int code_;
  int settings_;
};

/// All 4^settings... patterns (64 for three settings per party), ascending.
std::vector<ClickPattern> enumerate_patterns(int settings_per_party = 3);

/// Index sets of patterns where a given detector clicks, and complements.
struct LambdaSets {
  int settings_per_party = 3;
  std::vector<std::vector<ClickPattern>> set_a;  // set_a[i-1], |.| = 32
  std::vector<std::vector<ClickPattern>> set_b;
  std::vector<std::vector<ClickPattern>> complement_a;
  std::vector<std::vector<ClickPattern>> complement_b;

  bool in_a(int i, const ClickPattern& p) const { return p.alice_clicks(i); }
  bool in_b(int j, const ClickPattern& p) const { return p.bob_clicks(j); }
};

LambdaSets lambda_sets(int settings_per_party = 3);

}  // namespace uwit
