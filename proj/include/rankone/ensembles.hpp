#pragma once

#include "rankone/harness.hpp"
#include "rankone/io.hpp"
#include "rankone/random.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

/// GUE-like (G + G^*) / (2 sqrt(n)) with complex normal entries.
DenseOperator random_selfadjoint(Rng& rng, Eigen::Index n);

/// Haar unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal moved into Q.
Matrix haar_unitary(Rng& rng, Eigen::Index n);

DenseOperator random_unitary(Rng& rng, Eigen::Index n);

Vector random_unit_vector(Rng& rng, Eigen::Index n);

/// Q diag(eigenvalues) Q^* with Q Haar.
DenseOperator with_spectrum(Rng& rng, const std::vector<double>& eigenvalues);

/// Q A Q^*, re-Hermitized.
DenseOperator conjugate(const DenseOperator& a, const Matrix& q);

/// Jacobi window of `size` sites n_min = -size/2 .. n_min + size - 1.
struct SiteRange {
  Site first = 0;
  Site last = 0;
};
SiteRange centered_sites(long size);

/// CMV range j_min = -2 floor(size/4), j_max = j_min + size; size even.
SiteRange centered_cmv_range(long size);

/// Identifiers accepted by run_trial, in documentation order.
const std::vector<std::string>& theorem_ids();

/// Parameters of a seeded ensemble run. `model` selects the operator source
/// for thm31 (free | anderson | custom-file) and thm51 (cmv-random | cmv-file);
/// the file models use `window`.
struct EnsembleConfig {
  std::string theorem;
  int trials = 1;
  long size = 20;
  std::uint64_t seed = 0;
  std::optional<double> lambda;  // real coupling; cycles through +-1, +-0.5 when absent
  std::optional<double> phase;   // argument of the unimodular coupling; random when absent
  std::string model;
  double coupling = 1.0;
  double radius = 0.9;
  GridSpec grid;
  Tolerances tol;
  bool non_cyclic_demo = false;
  int jobs = 1;
  std::optional<Window> window;
};

/// Throws DomainError for unknown ids and inconsistent parameters.
void validate(const EnsembleConfig& config);

/// Trial `trial` of the ensemble; depends only on (config, trial).
VerificationReport run_trial(const EnsembleConfig& config, int trial);

/// All trials, ordered by trial index regardless of `jobs`.
std::vector<VerificationReport> run_ensemble(const EnsembleConfig& config);

}  // namespace rankone
