#pragma once

#include <string_view>

#include "evote/group/group.hpp"

namespace evote {

/// Symmetric pairing group on the supersingular curve E: y^2 = x^3 + x over F_p,
/// p = 3 mod 4, with a 160-bit subgroup order q dividing p + 1 (embedding degree 2).
///
/// The pairing is the reduced Tate pairing composed with the distortion map
/// (x, y) -> (-x, i*y), which takes values in the order-q subgroup of F_{p^2}^*.
/// Elements serialize as two fixed-width coordinates; the identity is all zeros
/// (the only other point with those coordinates, (0,0), has order 2 and is never in G_q).
class SupersingularGroup {
 public:
  struct Params {
    BigInt p;
    BigInt q;
    BigInt cofactor;  // (p + 1) / q
  };

  /// |p| = 1024 bits, |q| = 160 bits. p = cofactor * q - 1 with cofactor = 0 mod 4.
  static const Params& default_params() {
    static const Params params = [] {
      Params out;
      out.q = BigInt("b5b994c4c1a284ebbb4806755eed91ad71358919", 16);
      out.p = BigInt(
          "aca49302cd1371c63b467f34d09521e98aa466efc232c35727bfd4c0ff8c601e7696c404be1001be1fb0ace1747be91cd3e1524a32ff9a"
          "91e8697d3caca6772a8a396c28c9d3e983c3946dfbb6c9ed063b2419d70cbd3813ca93d807670ead161d283541b6b5fe5a7fe603aad4a70"
          "cc648273f8d2636b3628c592721b82dac3b",
          16);
      out.cofactor = (out.p + 1) / out.q;
      return out;
    }();
    return params;
  }

  class Element {
   public:
    Element() = default;
    bool is_identity() const { return inf_; }
    friend bool operator==(const Element& a, const Element& b) {
      return a.inf_ == b.inf_ && (a.inf_ || (a.x_ == b.x_ && a.y_ == b.y_));
    }

   private:
    friend class SupersingularGroup;
    Element(BigInt x, BigInt y) : x_(std::move(x)), y_(std::move(y)), inf_(false) {}
    BigInt x_, y_;
    bool inf_ = true;
  };

  /// a + b*i in F_{p^2} = F_p[i]/(i^2 + 1)
  class Target {
   public:
    Target() = default;
    friend bool operator==(const Target& l, const Target& r) { return l.a_ == r.a_ && l.b_ == r.b_; }

   private:
    friend class SupersingularGroup;
    Target(BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)) {}
    BigInt a_{1}, b_{0};
  };

  explicit SupersingularGroup(ByteView seed, const Params& params = default_params())
      : prm_(params), field_(params.q), pw_(byte_width(params.p)) {
    if (prm_.p % 4 != 3) throw GroupError("p must be 3 mod 4");
    if (prm_.cofactor * prm_.q != prm_.p + 1) throw GroupError("q does not divide p + 1");
    if (seed.empty()) throw GroupError("production setup requires a nonempty seed");
    g_ = hash_to_group("evote/generator/g", {});
    h_ = hash_to_group("evote/generator/h", seed);
    gt_ = pair(g_, g_);
  }

  static constexpr BackendId kBackend = BackendId::production;
  BackendId backend() const { return kBackend; }
  const ScalarField& field() const { return field_; }
  const BigInt& order() const { return prm_.q; }
  const Params& params() const { return prm_; }
  bool pairing_enabled() const { return true; }

  Element g() const { return g_; }
  Element h() const { return h_; }
  Element identity() const { return Element(); }

  Element mul(const Element& a, const Element& b) const { return add(a, b); }
  Element inv(const Element& a) const {
    if (a.inf_) return a;
    return Element(a.x_, fp(-a.y_));
  }
  Element exp(const Element& a, const Scalar& k) const { return scalar_mul(a, k.value()); }

  Target pair(const Element& P, const Element& Q) const {
    if (P.inf_ || Q.inf_) return Target();
    return final_exp(miller(P, Q));
  }
  Target gt() const { return gt_; }
  Target target_identity() const { return Target(); }
  Target tmul(const Target& a, const Target& b) const { return f2_mul(a, b); }
  Target tinv(const Target& a) const {
    // unitary after final exponentiation, but invert generally
    BigInt n = fp(a.a_ * a.a_ + a.b_ * a.b_);
    BigInt ni = fp_inv(n);
    return Target(fp(a.a_ * ni), fp(-a.b_ * ni));
  }
  Target texp(const Target& a, const Scalar& k) const { return f2_pow(a, k.value()); }

  std::size_t element_width() const { return 2 * pw_; }
  std::size_t target_width() const { return 2 * pw_; }

  Bytes serialize(const Element& a) const {
    if (a.inf_) return Bytes(element_width(), 0);
    Bytes out = to_bytes_be(a.x_, pw_);
    append(out, to_bytes_be(a.y_, pw_));
    return out;
  }

  Element deserialize(ByteView data) const {
    if (data.size() != element_width()) throw FormatError("curve point has wrong width");
    BigInt x = from_bytes_be(data.subspan(0, pw_));
    BigInt y = from_bytes_be(data.subspan(pw_, pw_));
    if (x == 0 && y == 0) return Element();
    if (x >= prm_.p || y >= prm_.p) throw FormatError("curve coordinate out of range");
    if (fp(y * y) != fp(x * x * x + x)) throw FormatError("point not on curve");
    Element pt(x, y);
    if (!scalar_mul(pt, prm_.q).inf_) throw FormatError("point not in the order-q subgroup");
    return pt;
  }

  Bytes serialize_target(const Target& t) const {
    Bytes out = to_bytes_be(t.a_, pw_);
    append(out, to_bytes_be(t.b_, pw_));
    return out;
  }

  Target deserialize_target(ByteView data) const {
    if (data.size() != target_width()) throw FormatError("target element has wrong width");
    Target t(from_bytes_be(data.subspan(0, pw_)), from_bytes_be(data.subspan(pw_, pw_)));
    if (t.a_ >= prm_.p || t.b_ >= prm_.p) throw FormatError("target coordinate out of range");
    if (!(f2_pow(t, prm_.q) == Target())) throw FormatError("target element not in G_T");
    return t;
  }

  /// Try-and-increment onto the curve, then clear the cofactor.
  Element hash_to_group(std::string_view domain, ByteView data) const {
    for (std::uint32_t ctr = 0;; ++ctr) {
      Bytes wide;
      for (std::uint32_t blk = 0; wide.size() < pw_ + 16; ++blk) {
        auto d = Sha256().field("evote/h2c").field(domain).field(data).update(be32(ctr)).update(be32(blk)).finish();
        append(wide, d);
      }
      wide.resize(pw_ + 16);
      BigInt x = fp(from_bytes_be(wide));
      BigInt rhs = fp(x * x * x + x);
      if (rhs == 0 || mpz_legendre(rhs.get_mpz_t(), prm_.p.get_mpz_t()) != 1) continue;
      BigInt y = pow_mod(rhs, (prm_.p + 1) / 4, prm_.p);
      if (y > prm_.p - y) y = prm_.p - y;
      Element pt = scalar_mul(Element(x, y), prm_.cofactor);
      if (!pt.inf_) return pt;
    }
  }

  std::uint64_t fingerprint() const {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(kBackend)).field(to_bytes_min(prm_.p)).field(to_bytes_min(prm_.q));
    w.field(serialize(g_)).field(serialize(h_));
    return fingerprint_of(w.bytes());
  }

 private:
  BigInt fp(const BigInt& v) const { return mod_pos(v, prm_.p); }
  BigInt fp_inv(const BigInt& v) const {
    BigInt r, a = fp(v);
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), prm_.p.get_mpz_t()) == 0) throw GroupError("F_p element not invertible");
    return r;
  }

  // --- affine group law ---

  Element dbl(const Element& a) const {
    if (a.inf_ || a.y_ == 0) return Element();
    BigInt lambda = fp((3 * a.x_ * a.x_ + 1) * fp_inv(2 * a.y_));
    BigInt x3 = fp(lambda * lambda - 2 * a.x_);
    BigInt y3 = fp(lambda * (a.x_ - x3) - a.y_);
    return Element(x3, y3);
  }

  Element add(const Element& a, const Element& b) const {
    if (a.inf_) return b;
    if (b.inf_) return a;
    if (a.x_ == b.x_) {
      if (fp(a.y_ + b.y_) == 0) return Element();
      return dbl(a);
    }
    BigInt lambda = fp((b.y_ - a.y_) * fp_inv(b.x_ - a.x_));
    BigInt x3 = fp(lambda * lambda - a.x_ - b.x_);
    BigInt y3 = fp(lambda * (a.x_ - x3) - a.y_);
    return Element(x3, y3);
  }

  // --- Jacobian scalar multiplication (X/Z^2, Y/Z^3) ---

  struct Jac {
    BigInt X, Y, Z;  // Z == 0 is infinity
  };

  void jdbl(Jac& r) const {
    if (r.Z == 0 || r.Y == 0) {
      r.Z = 0;
      return;
    }
    BigInt XX = fp(r.X * r.X), YY = fp(r.Y * r.Y), ZZ = fp(r.Z * r.Z);
    BigInt S = fp(4 * r.X * YY);
    BigInt M = fp(3 * XX + ZZ * ZZ);  // a = 1
    BigInt X3 = fp(M * M - 2 * S);
    BigInt Y3 = fp(M * (S - X3) - 8 * YY * YY);
    BigInt Z3 = fp(2 * r.Y * r.Z);
    r.X = X3;
    r.Y = Y3;
    r.Z = Z3;
  }

  void jadd_affine(Jac& r, const Element& b) const {
    if (b.inf_) return;
    if (r.Z == 0) {
      r = {b.x_, b.y_, BigInt(1)};
      return;
    }
    BigInt ZZ = fp(r.Z * r.Z);
    BigInt U2 = fp(b.x_ * ZZ);
    BigInt S2 = fp(b.y_ * ZZ * r.Z);
    BigInt H = fp(U2 - r.X), R = fp(S2 - r.Y);
    if (H == 0) {
      if (R == 0) {
        jdbl(r);
      } else {
        r.Z = 0;
      }
      return;
    }
    BigInt HH = fp(H * H), HHH = fp(HH * H);
    BigInt V = fp(r.X * HH);
    BigInt X3 = fp(R * R - HHH - 2 * V);
    BigInt Y3 = fp(R * (V - X3) - r.Y * HHH);
    BigInt Z3 = fp(r.Z * H);
    r.X = X3;
    r.Y = Y3;
    r.Z = Z3;
  }

  Element to_affine(const Jac& r) const {
    if (r.Z == 0) return Element();
    BigInt zi = fp_inv(r.Z);
    BigInt zi2 = fp(zi * zi);
    return Element(fp(r.X * zi2), fp(r.Y * zi2 * zi));
  }

  Element scalar_mul(const Element& a, const BigInt& k) const {
    if (a.inf_ || k == 0) return Element();
    Jac acc{0, 1, 0};
    for (long i = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; i >= 0; --i) {
      jdbl(acc);
      if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) jadd_affine(acc, a);
    }
    return to_affine(acc);
  }

  // --- F_{p^2} ---

  Target f2_mul(const Target& l, const Target& r) const {
    BigInt ac = l.a_ * r.a_, bd = l.b_ * r.b_;
    BigInt cross = (l.a_ + l.b_) * (r.a_ + r.b_) - ac - bd;
    return Target(fp(ac - bd), fp(cross));
  }
  Target f2_sqr(const Target& t) const { return Target(fp((t.a_ + t.b_) * (t.a_ - t.b_)), fp(2 * t.a_ * t.b_)); }
  Target f2_pow(const Target& t, const BigInt& e) const {
    Target acc;
    for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
      acc = f2_sqr(acc);
      if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = f2_mul(acc, t);
    }
    return acc;
  }

  // Line through T with slope lambda, evaluated at the distorted point (-xQ, i*yQ).
  Target line(const BigInt& lambda, const Element& T, const Element& Q) const {
    return Target(fp(lambda * (Q.x_ + T.x_) - T.y_), Q.y_);
  }

  // Miller loop for f_{q,P}; vertical lines are omitted since they land in F_p^*
  // and vanish under the final exponentiation.
  Target miller(const Element& P, const Element& Q) const {
    Target f;
    Element T = P;
    const BigInt& q = prm_.q;
    for (long i = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 2; i >= 0; --i) {
      BigInt lambda = fp((3 * T.x_ * T.x_ + 1) * fp_inv(2 * T.y_));
      f = f2_mul(f2_sqr(f), line(lambda, T, Q));
      T = dbl(T);
      if (mpz_tstbit(q.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
        if (T.x_ == P.x_) {
          T = Element();
        } else {
          BigInt l2 = fp((P.y_ - T.y_) * fp_inv(P.x_ - T.x_));
          f = f2_mul(f, line(l2, T, Q));
          T = add(T, P);
        }
      }
    }
    return f;
  }

  // f^((p^2 - 1) / q) = (conj(f) / f)^((p + 1) / q)
  Target final_exp(const Target& f) const {
    Target conj(f.a_, fp(-f.b_));
    return f2_pow(f2_mul(conj, tinv(f)), prm_.cofactor);
  }

  Params prm_;
  ScalarField field_;
  std::size_t pw_;
  Element g_, h_;
  Target gt_;
};

static_assert(PairingGroup<SupersingularGroup>);

}  // namespace evote
