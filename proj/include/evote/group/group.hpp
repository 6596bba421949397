#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>

#include "evote/scalar.hpp"

namespace evote {

enum class BackendId : std::uint8_t { mock = 1, production = 2 };

inline std::string_view backend_name(BackendId id) { return id == BackendId::mock ? "mock" : "production"; }

/// Prime-order cyclic group G_q with two generators g and h whose relative
/// discrete log is unknown to protocol parties.
template <class G>
concept CyclicGroup = requires(const G& grp, const typename G::Element& a, const Scalar& k, ByteView bytes) {
  typename G::Element;
  { grp.backend() } -> std::same_as<BackendId>;
  { grp.field() } -> std::same_as<const ScalarField&>;
  { grp.g() } -> std::same_as<typename G::Element>;
  { grp.h() } -> std::same_as<typename G::Element>;
  { grp.identity() } -> std::same_as<typename G::Element>;
  { grp.mul(a, a) } -> std::same_as<typename G::Element>;
  { grp.inv(a) } -> std::same_as<typename G::Element>;
  { grp.exp(a, k) } -> std::same_as<typename G::Element>;
  { grp.element_width() } -> std::same_as<std::size_t>;
  { grp.serialize(a) } -> std::same_as<Bytes>;
  { grp.deserialize(bytes) } -> std::same_as<typename G::Element>;
  { grp.hash_to_group(std::string_view{}, bytes) } -> std::same_as<typename G::Element>;
  { grp.fingerprint() } -> std::same_as<std::uint64_t>;
  { a == a } -> std::convertible_to<bool>;
};

/// Cyclic group with a symmetric bilinear map into a target group G_T.
template <class G>
concept PairingGroup = CyclicGroup<G> && requires(const G& grp, const typename G::Element& a,
                                                  const typename G::Target& t, const Scalar& k, ByteView bytes) {
  typename G::Target;
  { grp.pairing_enabled() } -> std::convertible_to<bool>;
  { grp.pair(a, a) } -> std::same_as<typename G::Target>;
  { grp.gt() } -> std::same_as<typename G::Target>;
  { grp.target_identity() } -> std::same_as<typename G::Target>;
  { grp.tmul(t, t) } -> std::same_as<typename G::Target>;
  { grp.tinv(t) } -> std::same_as<typename G::Target>;
  { grp.texp(t, k) } -> std::same_as<typename G::Target>;
  { grp.target_width() } -> std::same_as<std::size_t>;
  { grp.serialize_target(t) } -> std::same_as<Bytes>;
  { grp.deserialize_target(bytes) } -> std::same_as<typename G::Target>;
  { t == t } -> std::convertible_to<bool>;
};

/// a^x * b^y
template <CyclicGroup G>
typename G::Element exp2(const G& grp, const typename G::Element& a, const Scalar& x, const typename G::Element& b,
                         const Scalar& y) {
  return grp.mul(grp.exp(a, x), grp.exp(b, y));
}

template <CyclicGroup G>
typename G::Element exp_g(const G& grp, const Scalar& k) {
  return grp.exp(grp.g(), k);
}

inline std::uint64_t fingerprint_of(ByteView data) {
  auto d = sha256(data);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d[i];
  return v;
}

}  // namespace evote
