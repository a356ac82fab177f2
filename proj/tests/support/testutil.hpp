#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zenosim/core.hpp"
#include "zenosim/exec.hpp"

namespace zenosim::testutil {

// Deterministic xorshift-style generator so test corpora are reproducible.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  bool chance(double p) { return static_cast<double>(next() % 10000) < p * 10000; }
};

struct RandomMachineOptions {
  int minStates = 2;
  int maxStates = 5;
  double ruleDensity = 0.85;
  bool alwaysHaltState = true;
  // Restrict input/output moves to {Right, Stay}; with density 1 such
  // machines can only halt or cycle.
  bool avoidBoundaryMoves = false;
};

// Valid machine with input alphabet {0,1}, small work/output alphabets and a
// randomly filled transition table.
core::MachineDescription random_machine(Rng& rng, const RandomMachineOptions& opts = {});

// All 0/1 words of length <= maxLen, shortest first.
std::vector<core::Word> binary_words_up_to(int maxLen);

// Host-side binary successor, MSB first ("11" -> "100", "" -> "1").
std::string binary_successor(const std::string& bits);

// Exact replay of a certificate against a fresh copy of the machine.
bool certificate_replays(const exec::SteppableMachine& m, const exec::CycleCertificate& cert);

// Primes via a sieve, independent of the library's trial-division check.
std::vector<bool> sieve(uint32_t limit);

// Twin-pair bit for the window [lo, lo+width]: 1 iff some m with
// lo <= m, m+2 <= lo+width has m and m+2 prime.
bool twin_window_bit(const std::vector<bool>& isPrime, uint32_t lo, uint32_t width);

}  // namespace zenosim::testutil
