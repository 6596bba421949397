#pragma once

#include <string>
#include <string_view>

#include "evote/group/mock_group.hpp"
#include "evote/group/supersingular_group.hpp"

namespace evote {

enum class Profile { toy, test, production };

inline Profile parse_profile(std::string_view name) {
  if (name == "toy") return Profile::toy;
  if (name == "test") return Profile::test;
  if (name == "production") return Profile::production;
  throw GroupError("unsupported security profile: " + std::string(name));
}

inline std::string_view profile_name(Profile p) {
  switch (p) {
    case Profile::toy:
      return "toy";
    case Profile::test:
      return "test";
    case Profile::production:
      return "production";
  }
  return "?";
}

/// Toy group: the order-11 subgroup of Z_23^* with g = 2 and h = 13 = 2^7.
inline MockGroup toy_group() { return MockGroup(BigInt(11), BigInt(23), BigInt(2), BigInt(7)); }

namespace detail {
// Public, recomputable derivation of log_g(h) from a seed (the mock records it openly).
inline Scalar derive_log_h(const BigInt& q, ByteView seed) {
  ScalarField f(q);
  Scalar log_h;
  for (std::uint32_t ctr = 0; log_h.is_zero(); ++ctr) {
    ByteWriter w;
    w.field(seed).u32(ctr);
    log_h = f.hash_to_scalar("evote/generator/h", w.bytes());
  }
  return log_h;
}
}  // namespace detail

/// Mock group of a caller-chosen prime order with no residue view; h is derived from the seed.
inline MockGroup mock_group_of_order(const BigInt& q, ByteView seed) {
  Scalar log_h = detail::derive_log_h(q, seed);
  return MockGroup(q, BigInt(0), BigInt(0), log_h.value());
}

/// 61-bit mock group inside the safe-prime group Z_p^*, p = 2q + 1, g = 4.
inline MockGroup test_group(ByteView seed) {
  if (seed.empty()) throw GroupError("test setup requires a nonempty seed");
  const BigInt q("1994542170561539831");
  Scalar log_h = detail::derive_log_h(q, seed);
  return MockGroup(q, 2 * q + 1, BigInt(4), log_h.value());
}

inline MockGroup setup_mock_group(Profile profile, ByteView seed) {
  switch (profile) {
    case Profile::toy:
      return toy_group();
    case Profile::test:
      return test_group(seed);
    case Profile::production:
      break;
  }
  throw GroupError("production profile uses the pairing-curve backend");
}

inline SupersingularGroup setup_production_group(ByteView seed) { return SupersingularGroup(seed); }

/// Builds the group for a profile and hands it to a generic callable.
template <class F>
decltype(auto) with_group(Profile profile, ByteView seed, F&& fn) {
  if (profile == Profile::production) {
    const auto grp = setup_production_group(seed);
    return fn(grp);
  }
  const auto grp = setup_mock_group(profile, seed);
  return fn(grp);
}

}  // namespace evote
