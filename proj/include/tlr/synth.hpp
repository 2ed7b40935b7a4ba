#pragma once

// Seeded synthetic scenes with known ground truth. Every generator is
// deterministic for a fixed seed.

#include "tlr/tensor3.hpp"

#include <cstdint>
#include <vector>

namespace tlr {

/// t_product(A, B) with A (n1 x rank x n3) and B (rank x n2 x n3) drawn
/// from N(0, 1).
Tensor3d low_tubal_rank(Dims dims, Index rank, std::uint64_t seed);

/// Each entry is nonzero with probability rho, then +-magnitude with equal
/// odds.
Tensor3d sparse_spikes(Dims dims, double rho, double magnitude,
                       std::uint64_t seed);

/// Each entry observed with probability `observed`.
Mask3 missing_mask(Dims dims, double observed, std::uint64_t seed);

struct VideoParams {
  Dims dims{32, 32, 20};
  Index block = 6;       // side of the moving square
  double ripple = 0.05;  // amplitude of the rippling strip; 0 disables it
};

struct VideoScene {
  Tensor3d video;      // background + ripple + foreground
  Tensor3d background; // rank one, identical in every frame
  Tensor3d ripple;
  Mask3 foreground;    // pixels covered by the moving square
};

/// A bright square crossing a static rank-one background, with a rippling
/// strip along the bottom rows.
VideoScene surveillance_video(const VideoParams &p, std::uint64_t seed);

struct RainParams {
  Dims dims{32, 32, 10};
  double density = 0.05;  // fraction of pixels covered by streaks
  double magnitude = 0.8;
  Index min_length = 4;
  Index max_length = 10;
};

struct RainScene {
  Tensor3d rainy;
  Tensor3d clean;
  Mask3 streaks;
};

/// Smooth low-rank background plus vertical streaks of constant magnitude.
RainScene rain_streaks(const RainParams &p, std::uint64_t seed);

struct HsiParams {
  Dims dims{32, 32, 8};
  Index materials = 4;
  Index tile = 8;          // side of the constant-material tiles
  double sigma = 0.1;      // Gaussian noise
  double impulse = 0.05;   // fraction of salt-and-pepper entries
  Index stripes = 0;       // number of striped (column, band) pairs
  double stripe_offset = 0.1;
};

struct HsiScene {
  Tensor3d noisy;
  Tensor3d clean;
  Mask3 impulses;
};

/// Tiles of a few materials, each with a piecewise-constant spectrum, then
/// Gaussian noise, impulses and column stripes.
HsiScene hsi_cube(const HsiParams &p, std::uint64_t seed);

struct SubmoduleParams {
  Index n1 = 16;
  Index n3 = 8;
  Index clusters = 3;
  Index per_cluster = 15;
  Index dimension = 2; // number of basis images per submodule
};

struct SubmoduleData {
  Tensor3d images;        // n1 x N x n3, images as lateral slices
  std::vector<int> labels;
};

/// Every image is a t-linear combination of its submodule's basis images,
/// scaled to unit norm. Images are shuffled.
SubmoduleData submodule_images(const SubmoduleParams &p, std::uint64_t seed);

} // namespace tlr
