#include "uwit/patterns.hpp"

#include <stdexcept>
#include <string>

namespace uwit {

ClickPattern::ClickPattern(int code, int settings_per_party)
    : code_(code), settings_(settings_per_party) {
  if (settings_ < 1) {
    throw std::invalid_argument("ClickPattern: settings_per_party must be >= 1");
  }
  const int n = 1 << (2 * settings_);
  if (code_ < 0 || code_ >= n) {
    throw std::invalid_argument("ClickPattern: code " + std::to_string(code) +
                                " out of range [0, " + std::to_string(n) + ")");
  }
}

ClickPattern ClickPattern::from_bits(const std::vector<int>& bits) {
  if (bits.size() % 2 != 0 || bits.empty()) {
    throw std::invalid_argument("ClickPattern: bit tuple must have even length");
  }
  int code = 0;
  for (size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != 0 && bits[k] != 1) {
      throw std::invalid_argument("ClickPattern: bits must be 0 or 1");
    }
    code |= bits[k] << k;
  }
  return ClickPattern(code, static_cast<int>(bits.size() / 2));
}

std::vector<int> ClickPattern::bits() const {
  std::vector<int> out(2 * settings_);
  for (int k = 0; k < 2 * settings_; ++k) out[k] = bit(k) ? 1 : 0;
  return out;
}

std::vector<ClickPattern> enumerate_patterns(int settings_per_party) {
  const int n = 1 << (2 * settings_per_party);
  std::vector<ClickPattern> out;
  out.reserve(n);
  for (int code = 0; code < n; ++code) {
    out.emplace_back(code, settings_per_party);
  }
  return out;
}

LambdaSets lambda_sets(int settings_per_party) {
  LambdaSets sets;
  sets.settings_per_party = settings_per_party;
  sets.set_a.resize(settings_per_party);
  sets.set_b.resize(settings_per_party);
  sets.complement_a.resize(settings_per_party);
  sets.complement_b.resize(settings_per_party);
  for (const ClickPattern& p : enumerate_patterns(settings_per_party)) {
    for (int i = 1; i <= settings_per_party; ++i) {
      (p.alice_clicks(i) ? sets.set_a : sets.complement_a)[i - 1].push_back(p);
      (p.bob_clicks(i) ? sets.set_b : sets.complement_b)[i - 1].push_back(p);
    }
  }
  return sets;
}

}  // namespace uwit
