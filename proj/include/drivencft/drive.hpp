#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "drivencft/complex2x2.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/rng.hpp"
#include "drivencft/scaled_product.hpp"

namespace drivencft {

// Operator ordering of a step sequence. "paper" places the first applied
// step leftmost in the matrix product (stream appends on the right);
// "reversed" appends on the left.
enum class Ordering { paper, reversed };

// One elementary drive step: prebuilt chiral/antichiral matrices plus the
// step duration in units of the total length L.
struct StepSpec {
  Mat2 holo{};
  Mat2 anti{};
  double durationOverL = 0.0;
};

// Sequence law selecting step 0 or step 1 at each elementary index. The
// letter streams are infinite and random-access; the count fields bound only
// materialized runs.
struct Law {
  enum class Kind { ThueMorse, RMD, Random, Periodic };
  Kind kind = Kind::ThueMorse;
  int n = 0;                   // Thue-Morse order
  int eta = 0;                 // multipolar order
  std::uint64_t blocks = 1;    // RMD block count
  std::uint64_t length = 1;    // Random / Periodic elementary count
  std::uint64_t seed = 0;

  static Law thueMorse(int n);
  static Law rmd(int eta, std::uint64_t blocks, std::uint64_t seed);
  static Law random(std::uint64_t length, std::uint64_t seed);
  static Law periodic(std::uint64_t length);
};

struct Protocol {
  StepSpec step0;
  StepSpec step1;
  Law law;
  Ordering ordering = Ordering::paper;
};

// Letter at position i of the infinite Thue-Morse word (0-substitution
// 0 -> 01, 1 -> 10): the parity of the popcount of i.
inline int tm_letter(std::uint64_t i) {
  return static_cast<int>(std::popcount(i) & 1U);
}

// First 2^n letters of the Thue-Morse word, 0 <= n <= 30.
std::vector<int> thue_morse_letters(int n);

// Level-n recursive blocks M_n = M_{n-1} N_{n-1}, N_n = N_{n-1} M_{n-1},
// computed by n doublings in scaled form. Each block is the ordered product
// of exactly 2^n elementary matrices.
struct BlockPair {
  ScaledProduct M;
  ScaledProduct N;
  int order = 0;
};

BlockPair tm_blocks(const Mat2& m0, const Mat2& n0, int n);

// Fair-coin block choices for an order-eta random multipolar drive: bit b_i
// selects block M_eta (0) or N_eta (1) for block index i.
std::vector<int> rmd_sequence(int eta, std::uint64_t blocks,
                              std::uint64_t seed);

// Elementary-step letter at index i under the law. For RMD the elementary
// expansion of block b is the level-eta word of that block, i.e. the
// Thue-Morse letter of the offset complemented when the coin picks N.
int protocol_letter(const Law& law, std::uint64_t i);

// Number of elementary steps a full materialized run of the law covers.
std::uint64_t protocol_elementary_count(const Law& law);

}  // namespace drivencft
