#pragma once

// Tolerances and default parameters for the experiment suite.

namespace sclab::defaults {

inline constexpr int kSchemaVersion = 1;
inline constexpr unsigned long long kSeed = 20240611ULL;

inline constexpr double kZeta = 0.5;
inline constexpr double kEta1 = 8.0;
inline constexpr double kEta2 = 0.5;

// weyl
inline constexpr double kWeylSlopeTol = 0.02;
inline constexpr double kWeylRatioTol = 0.05;
inline constexpr double kWeylRatioFrom = 100.0;  // count / lambda^2 checked for lambda >= this

// basis identities
inline constexpr double kGramTol = 1e-10;
inline constexpr double kVNormTol = 1e-10;
inline constexpr double kZeroTol = 1e-11;

// wkb
inline constexpr double kWkbVariation = 3.0;
inline constexpr double kNormConstC = 0.05;  // |c|^2 / l in [C, 1/C]
inline constexpr double kWkbSamplesPerWavelength = 16.0;

// exponential sums
inline constexpr int kKlTrials = 10000;
inline constexpr double kPhaseSumVariation = 2.0;
inline constexpr int kPhaseSumSamples = 50;

// densities
inline constexpr double kSlopeTol = 0.07;
inline constexpr double kSupSlopeTol = 0.05;
inline constexpr double kWindowVariation = 2.0;
inline constexpr double kSoggeSlopeTol = 0.03;
inline constexpr double kUpperGrowth = 2.0;
inline constexpr double kHeuristicLo = 0.5;
inline constexpr double kHeuristicHi = 2.0;
inline constexpr double kResolutionTol = 1e-6;

// schatten
inline constexpr double kDualTailVariation = 2.0;
inline constexpr double kDualTailFrom = 20.0;
inline constexpr double kOscVariation = 2.0;
inline constexpr double kOscTol = 1e-4;
inline constexpr double kOscNodesPerWavelength = 10.0;
inline constexpr double kKssSlopeTol = 0.1;
inline constexpr double kKernelRouteTol = 1e-6;

}  // namespace sclab::defaults
