#pragma once

#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "qperm/hopf.hpp"
#include "qperm/states.hpp"

namespace qperm {

using Json = nlohmann::json;

/// Builds the magic unitary described by a GroupSpec:
///   {"kind":"symmetric","n":4}
///   {"kind":"dual","cayley":[[...]],"identity":0,"generators":[1,5],"label":"S3-hat"}
///   {"kind":"dual","permutations":[[2,1,3],[3,2,1]]}
///   {"kind":"kac_paljutkin"}
///   {"kind":"direct_sum","parts":[...]}
///   {"kind":"repeat","part":{...},"times":2}
/// Throws InvalidSpec on malformed input.
MagicUnitary magic_from_spec(const Json& spec);

/// StateSpec (1-based indices, see README) evaluated on a built group.
QuantumPermutation state_from_spec(const GroupPtr& h, const Json& spec);

/// Key used to cache groups: the spec dumped with sorted keys.
std::string canonical_key(const Json& spec);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// Self-contained bundle of every field; doubles are written with enough
/// digits to read back bit for bit.
Json hopf_to_json(const HopfData& h);
HopfData hopf_from_json(const Json& j);

/// v rounded to 12 significant digits; |v| < 1e-12 prints as 0
double sig12(double v);
Json slice_to_json(const BirkhoffSlice& s);

/// Built groups keyed by canonical spec, with the fixed-point spectrum
/// computed on first use.
class GroupCache {
 public:
  struct Entry {
    GroupPtr group;
    const FixSpectrum& fix_spectrum() const;

   private:
    friend class GroupCache;
    mutable std::once_flag fix_once_;
    mutable FixSpectrum fix_;
  };

  std::shared_ptr<const Entry> get(const Json& spec);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

}  // namespace qperm
