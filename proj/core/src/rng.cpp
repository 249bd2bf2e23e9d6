#include "depnet/rng.hpp"

#include "depnet/errors.hpp"

namespace depnet {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_index(int m) {
  if (m <= 0) throw DomainError("Rng::next_index: m must be positive");
  const int k = static_cast<int>(next_unit() * static_cast<double>(m));
  return k < m ? k : m - 1;
}

int Rng::next_categorical(std::span<const double> probs) {
  if (probs.empty()) throw DomainError("Rng::next_categorical: empty row");
  const double u = next_unit();
  double acc = 0.0;
  int last_positive = -1;
  for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
    if (probs[k] > 0.0) last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  if (last_positive < 0) throw DomainError("Rng::next_categorical: all-zero row");
  return last_positive;
}

}  // namespace depnet
