#pragma once

/// Singularity-free attitude propagation in affine-patch coordinates of
/// RP^3, with quaternion baselines, patch-switch control, rate profiles and
/// reporting utilities. Header-only; include this umbrella or the individual
/// headers.

#include "patchrot/harness.hpp"
#include "patchrot/integrate.hpp"
#include "patchrot/kinematics.hpp"
#include "patchrot/profile.hpp"
#include "patchrot/projective.hpp"
#include "patchrot/report.hpp"
#include "patchrot/rotation.hpp"
#include "patchrot/vec.hpp"
