#pragma once

#include "qos/cone.hpp"
#include "qos/realization.hpp"
#include "qos/states.hpp"

namespace qos {

struct SeminormResult {
  double value = 0.0;
  ConeCertificate witness;   // for (value + delta)^2 1 - a^* a
  DualCertificate lower;     // state with g(a^* a) > (value - delta)^2
  bool witness_ok = false;
  bool lower_ok = false;
};

/// ||a||_A for a in the algebra of `whole` (a whole-algebra context).
SeminormResult seminorm(const ConeContext& whole, const CVec& a, const Tolerances& tol = Tolerances::from_env());

struct BoundednessWitness {
  double bound = 0.0;
  ConeCertificate certificate;  // k^2 1 - x^* x
};

BoundednessWitness is_bounded(const ConeContext& whole, const CVec& x, const Tolerances& tol = Tolerances::from_env());
bool in_unit_ball(const ConeContext& whole, const CVec& x, const Tolerances& tol = Tolerances::from_env());

/// sup |f(x)| over x in the domain with x^* x <= 1, computed exactly through
/// the faithful realization. `maximizer` attains the value.
struct FunctionalBound {
  double value = 0.0;
  CVec maximizer;  // ambient coordinates
  bool unbounded = false;
  bool positive_shortcut = false;
};

FunctionalBound functional_bound(const LinearFunctional& f, const CStarRealization& r,
                                 const Tolerances& tol = Tolerances::from_env());
/// Same value without the positivity shortcut.
FunctionalBound functional_bound_exact(const LinearFunctional& f, const CStarRealization& r,
                                       const Tolerances& tol = Tolerances::from_env());

struct MapBound {
  double lower = 0.0;
  double upper = 0.0;
  bool cp_shortcut = false;
};

enum class CpHint { Unknown, Yes, No };

MapBound map_bound(const CPMapCandidate& phi, const CStarRealization& r, Rng& rng, int samples = 50,
                   const Tolerances& tol = Tolerances::from_env(), CpHint hint = CpHint::Unknown);

}  // namespace qos
