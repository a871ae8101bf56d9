#include "drivencft/drive.hpp"

#include <cmath>
#include <string>

namespace drivencft {

namespace {

void check_unimodular(const Mat2& m, const char* what) {
  if (!allFinite(m)) throw InvalidParameter("non-finite block input");
  if (std::abs(det(m) - cplx(1.0, 0.0)) > 1e-6)
    throw InvalidParameter(std::string(what) + " must be unimodular");
}

}  // namespace

Law Law::thueMorse(int n) {
  if (n < 0 || n > 60) throw CapacityError("Thue-Morse order out of range");
  Law law;
  law.kind = Kind::ThueMorse;
  law.n = n;
  return law;
}

Law Law::rmd(int eta, std::uint64_t blocks, std::uint64_t seed) {
  if (eta < 0 || eta > 60) throw InvalidParameter("eta out of range");
  if (blocks < 1) throw InvalidParameter("blocks must be >= 1");
  Law law;
  law.kind = Kind::RMD;
  law.eta = eta;
  law.blocks = blocks;
  law.seed = seed;
  return law;
}

Law Law::random(std::uint64_t length, std::uint64_t seed) {
  if (length < 1) throw InvalidParameter("length must be >= 1");
  Law law;
  law.kind = Kind::Random;
  law.length = length;
  law.seed = seed;
  return law;
}

Law Law::periodic(std::uint64_t length) {
  if (length < 1) throw InvalidParameter("length must be >= 1");
  Law law;
  law.kind = Kind::Periodic;
  law.length = length;
  return law;
}

std::vector<int> thue_morse_letters(int n) {
  if (n < 0 || n > 30)
    throw CapacityError("Thue-Morse letter expansion supports 0 <= n <= 30");
  std::size_t count = std::size_t{1} << n;
  std::vector<int> letters(count);
  for (std::size_t i = 0; i < count; ++i)
    letters[i] = tm_letter(static_cast<std::uint64_t>(i));
  return letters;
}

BlockPair tm_blocks(const Mat2& m0, const Mat2& n0, int n) {
  if (n < 0 || n > 60)
    throw CapacityError("block order supports 0 <= n <= 60");
  check_unimodular(m0, "M0");
  check_unimodular(n0, "N0");
  BlockPair bp;
  bp.M = ScaledProduct::of(m0);
  bp.N = ScaledProduct::of(n0);
  bp.order = 0;
  for (int k = 0; k < n; ++k) {
    ScaledProduct m = bp.M.times(bp.N);
    ScaledProduct nn = bp.N.times(bp.M);
    bp.M = m;
    bp.N = nn;
    bp.order = k + 1;
  }
  return bp;
}

std::vector<int> rmd_sequence(int eta, std::uint64_t blocks,
                              std::uint64_t seed) {
  if (eta < 0) throw InvalidParameter("eta must be >= 0");
  if (blocks < 1) throw InvalidParameter("blocks must be >= 1");
  std::vector<int> bits(static_cast<std::size_t>(blocks));
  for (std::uint64_t b = 0; b < blocks; ++b)
    bits[static_cast<std::size_t>(b)] = coinLetter(seed, b);
  return bits;
}

int protocol_letter(const Law& law, std::uint64_t i) {
  switch (law.kind) {
    case Law::Kind::ThueMorse:
      return tm_letter(i);
    case Law::Kind::RMD: {
      std::uint64_t mask = (law.eta >= 64)
                               ? ~std::uint64_t{0}
                               : ((std::uint64_t{1} << law.eta) - 1);
      int inner = tm_letter(i & mask);
      int coin = coinLetter(law.seed, i >> law.eta);
      return inner ^ coin;
    }
    case Law::Kind::Random:
      return coinLetter(law.seed, i);
    case Law::Kind::Periodic:
      return static_cast<int>(i & 1U);
  }
  throw InvalidParameter("unknown law kind");
}

std::uint64_t protocol_elementary_count(const Law& law) {
  switch (law.kind) {
    case Law::Kind::ThueMorse:
      return std::uint64_t{1} << law.n;
    case Law::Kind::RMD: {
      if (law.eta >= 64) throw CapacityError("eta too large");
      std::uint64_t expanded = law.blocks << law.eta;
      if ((expanded >> law.eta) != law.blocks)
        throw CapacityError("elementary expansion overflows 64 bits");
      return expanded;
    }
    case Law::Kind::Random:
    case Law::Kind::Periodic:
      return law.length;
  }
  throw InvalidParameter("unknown law kind");
}

}  // namespace drivencft
