#pragma once

#include <optional>
#include <string_view>

#include "evote/group/group.hpp"

namespace evote {

struct MockOracle;

/// Discrete-log-transparent group used as a brute-force oracle.
///
/// Every element is held as its exponent relative to g, so the group law is
/// addition mod q and the pairing multiplies exponents: e(g^a, g^b) = e(g,g)^(ab).
/// When a modulus p with q | p-1 is attached, elements can also be viewed as
/// residues of the order-q subgroup of Z_p^* (the toy profile uses p=23, q=11, g=2).
///
/// The serialized form is the exponent itself. log_g(h) is only reachable
/// through MockOracle.
class MockGroup {
 public:
  class Element {
   public:
    Element() = default;
    friend bool operator==(const Element& a, const Element& b) { return a.log_ == b.log_; }

   private:
    friend class MockGroup;
    friend struct MockOracle;
    explicit Element(BigInt log) : log_(std::move(log)) {}
    BigInt log_;
  };

  class Target {
   public:
    Target() = default;
    friend bool operator==(const Target& a, const Target& b) { return a.log_ == b.log_; }

   private:
    friend class MockGroup;
    friend struct MockOracle;
    explicit Target(BigInt log) : log_(std::move(log)) {}
    BigInt log_;
  };

  /// q must be prime. If p is nonzero, g_residue must generate the order-q subgroup of Z_p^*.
  MockGroup(BigInt q, BigInt p, BigInt g_residue, BigInt log_h, bool pairing_enabled = true)
      : field_(q), p_(std::move(p)), g_residue_(std::move(g_residue)), pairing_(pairing_enabled) {
    if (mpz_probab_prime_p(q.get_mpz_t(), 40) == 0) throw GroupError("mock group order is not prime");
    if (p_ != 0) {
      if ((p_ - 1) % q != 0) throw GroupError("q does not divide p-1");
      if (g_residue_ == 1 || pow_mod(g_residue_, q, p_) != 1) throw GroupError("g does not have order q mod p");
    }
    log_h_ = field_.from(log_h);
    if (log_h_.is_zero()) throw GroupError("h must be a generator");
  }

  static constexpr BackendId kBackend = BackendId::mock;
  BackendId backend() const { return kBackend; }
  const ScalarField& field() const { return field_; }
  const BigInt& order() const { return field_.order(); }
  bool pairing_enabled() const { return pairing_; }

  /// Subgroup modulus for the residue view, or 0 when the group is exponent-only.
  const BigInt& modulus() const { return p_; }

  Element g() const { return Element(BigInt(1)); }
  Element h() const { return Element(log_h_.value()); }
  Element identity() const { return Element(BigInt(0)); }

  Element mul(const Element& a, const Element& b) const { return Element(red(a.log_ + b.log_)); }
  Element inv(const Element& a) const { return Element(red(-a.log_)); }
  Element exp(const Element& a, const Scalar& k) const { return Element(red(a.log_ * k.value())); }

  Target pair(const Element& a, const Element& b) const {
    if (!pairing_) throw GroupError("pairing unavailable on this backend");
    return Target(red(a.log_ * b.log_));
  }
  Target gt() const { return pair(g(), g()); }
  Target target_identity() const { return Target(BigInt(0)); }
  Target tmul(const Target& a, const Target& b) const { return Target(red(a.log_ + b.log_)); }
  Target tinv(const Target& a) const { return Target(red(-a.log_)); }
  Target texp(const Target& a, const Scalar& k) const { return Target(red(a.log_ * k.value())); }

  std::size_t element_width() const { return field_.width(); }
  std::size_t target_width() const { return field_.width(); }

  Bytes serialize(const Element& a) const { return to_bytes_be(a.log_, element_width()); }
  Element deserialize(ByteView data) const { return Element(decode(data)); }
  Bytes serialize_target(const Target& t) const { return to_bytes_be(t.log_, target_width()); }
  Target deserialize_target(ByteView data) const { return Target(decode(data)); }

  Element hash_to_group(std::string_view domain, ByteView data) const {
    return Element(field_.hash_to_scalar(domain, data).value());
  }

  /// g^log mod p for elements of the residue view.
  BigInt residue(const Element& a) const {
    if (p_ == 0) throw GroupError("mock group has no residue modulus");
    return pow_mod(g_residue_, a.log_, p_);
  }
  std::optional<Element> from_residue(const BigInt& r) const {
    if (p_ == 0 || order() > 1'000'000) throw GroupError("residue lookup only available for small groups");
    BigInt acc = 1;
    for (BigInt e = 0; e < order(); ++e) {
      if (acc == mod_pos(r, p_)) return Element(e);
      acc = mod_pos(acc * g_residue_, p_);
    }
    return std::nullopt;
  }

  std::uint64_t fingerprint() const {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(kBackend)).field(to_bytes_min(order())).field(to_bytes_min(p_));
    w.field(to_bytes_min(log_h_.value())).u8(pairing_ ? 1 : 0);
    return fingerprint_of(w.bytes());
  }

 private:
  friend struct MockOracle;

  BigInt red(const BigInt& v) const { return mod_pos(v, order()); }
  BigInt decode(ByteView data) const {
    if (data.size() != element_width()) throw FormatError("mock element has wrong width");
    BigInt v = from_bytes_be(data);
    if (v >= order()) throw FormatError("mock element outside G_q");
    return v;
  }

  ScalarField field_;
  BigInt p_;
  BigInt g_residue_;
  Scalar log_h_;
  bool pairing_;
};

/// Test-only window into the mock's discrete logs.
struct MockOracle {
  static const Scalar& log_h(const MockGroup& grp) { return grp.log_h_; }
  static Scalar log_of(const MockGroup& grp, const MockGroup::Element& a) { return grp.field().from(a.log_); }
  static Scalar log_of(const MockGroup& grp, const MockGroup::Target& t) { return grp.field().from(t.log_); }
  static MockGroup::Element element(const MockGroup& grp, const Scalar& log) {
    return MockGroup::Element(grp.field().from(log.value()).value());
  }
};

static_assert(PairingGroup<MockGroup>);

}  // namespace evote
