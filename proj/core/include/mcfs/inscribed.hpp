#pragma once

#include <vector>

#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"

namespace mcfs {

/// Per-node inscribed (kbar) and exscribed (klow) curvatures of the embedded
/// hypersurface, computed from chords in R^{n+2}:
///   kbar(p) = sup_{q != p} 2 <p - q, nu(p)> / |p - q|^2.
/// By symmetry the search reduces to (profile node, relative orbit angle);
/// for each node pair the chord ratio is monotone in cos(angle), so only the
/// two extreme angles are evaluated.  The local limits lambda_max / lambda_min
/// are joined in, which guarantees kbar >= lambda_n and klow <= lambda_1.
struct InscribedResult {
  std::vector<double> kbar;
  std::vector<double> klow;
};

/// Throws std::invalid_argument on self-intersecting profiles.
InscribedResult inscribed_exscribed(const ProfileCurve& p, int n,
                                    const ProfileGeometry& g);
InscribedResult inscribed_exscribed(const ProfileCurve& p, int n);

}  // namespace mcfs
