#pragma once

#include <span>
#include <string>
#include <vector>

#include "ricci/geometry.hpp"

namespace ricci {

// Writes columns of equal length as CSV with full double precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);

// Canonical serializations: profiles as `s,psi`, curvature fields as
// `s,K0,K1,R,Q`.
void write_profile_csv(const std::string& path, const ProfileGrid& p);
void write_curvature_csv(const std::string& path, const ProfileGrid& p,
                         const CurvatureFields& c);

}  // namespace ricci
