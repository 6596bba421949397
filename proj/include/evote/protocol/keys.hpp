#pragma once

#include <vector>

#include "evote/sig/ring.hpp"

namespace evote {

/// Everything a verifier needs besides the boards.
template <CyclicGroup G>
struct ElectionPublics {
  using Element = typename G::Element;
  std::uint32_t m = 0;        // candidates
  Element ea_sign;            // verifies token signatures
  Element ea_enc;             // encrypts booth records
  Ring<G> po_ring;            // g^{x_k}, one per booth
  Ring<G> evm_ring;           // one key per booth EVM

  std::uint32_t booths() const { return static_cast<std::uint32_t>(po_ring.size()); }
};

template <CyclicGroup G>
struct AuthorityKeys {
  KeyPair<G> ea_sign;
  KeyPair<G> ea_enc;
  std::vector<KeyPair<G>> po;
  std::vector<KeyPair<G>> evm;

  ElectionPublics<G> publics(std::uint32_t m) const {
    ElectionPublics<G> p{m, ea_sign.pub, ea_enc.pub, {}, {}};
    for (const auto& k : po) p.po_ring.push_back(k.pub);
    for (const auto& k : evm) p.evm_ring.push_back(k.pub);
    return p;
  }
};

template <CyclicGroup G>
AuthorityKeys<G> generate_authority(const G& grp, std::uint32_t booths, Drbg& rng) {
  if (booths == 0) throw ProtocolError("at least one booth is required");
  AuthorityKeys<G> keys{keygen(grp, rng), keygen(grp, rng), {}, {}};
  for (std::uint32_t k = 0; k < booths; ++k) {
    keys.po.push_back(keygen(grp, rng));
    keys.evm.push_back(keygen(grp, rng));
  }
  return keys;
}

/// Residue of a scalar's integer value modulo a small m.
inline std::uint32_t mod_small(const BigInt& v, std::uint32_t m) {
  return static_cast<std::uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), m));
}

}  // namespace evote
