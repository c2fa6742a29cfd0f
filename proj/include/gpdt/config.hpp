#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpdt {

// Domain failure (bad input, violated precondition, insufficient gap, ...).
// The CLI maps this to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File / parse failure; the CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// One shared record of numeric tolerances; modules take it by value so a CLI
// override propagates everywhere consistently.
struct Tolerances {
  double tau_zero = 1e-9;     // nullspace membership: eigenvalue < tau_zero
  double tau_psd = 1e-9;      // PSD slack / Gram truncation
  double eig_cluster = 1e-7;  // merge radius for distinct-eigenvalue lists
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

// Hard cap on breadth-first group closure (overridable via CLI --cap).
inline constexpr std::size_t kDefaultClosureCap = 20000;

// Dense eigensolver cap; larger problems must go through the iterative path.
inline constexpr std::size_t kDenseEigCap = 4096;

// Deterministic RNG: mt19937_64 output mapped to doubles/ints by hand, so the
// stream does not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) { next(); }

  std::uint64_t next() {
    // xorshift64* keeps the generator tiny and bit-stable everywhere
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double uniform_pm1() { return 2.0 * uniform() - 1.0; }

  // uniform integer in [0, n)
  std::size_t below(std::size_t n) {
    if (n == 0) throw Error("Rng::below: n must be positive");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return static_cast<std::size_t>(x % n);
  }

 private:
  std::uint64_t state_;
};

// Number of worker threads; bounded by the GPDT_THREADS environment variable.
std::size_t thread_budget();

}  // namespace gpdt
