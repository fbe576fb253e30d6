#pragma once

// Reconstruction for real waveforms, where every source leaves a positive
// and a negative residue on each ring and the negative copies are unlabeled.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "remrec/decoder_complex.hpp"
#include "remrec/numtheory.hpp"
#include "remrec/parallel.hpp"
#include "remrec/remainder_model.hpp"

namespace remrec {

// op1 keeps common residues as they are; op2 moves those >= gamma/2 down by
// gamma.
enum class OperationChoice { op1, op2 };

struct RealDecodeSolution {
  std::vector<double> estimates;
  std::vector<i64> folding_numbers;
  // Single-source decoding records the operation used; the multi-source
  // decoder shifts by tau cuts instead and leaves this empty.
  std::vector<OperationChoice> operations;
  // clusters[i][l] indexes obs.residues[l].
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<TauAssignment> taus;
  double certified_bound = 0.0;
  // Both observed common residues coincide on every ring (r_c at 0 or gamma/2).
  bool degenerate = false;
};

// min over subsets U of the first ceil(L/N) parts (empty set included,
// lcm(empty) = 1) of (lcm U + lcm U')/2 - 1. Value range is gamma times this.
Rational real_folding_range(std::span<const i64> parts, std::size_t n_sources);
Rational real_folding_range(const ModulusSet& moduli, std::size_t n_sources);

struct RangeWitness {
  Rational range;
  // Bit l set means modulus l is in U.
  std::uint64_t subset = 0;
  // Y = |lcm U - lcm U'|/2 shares every residue set with X = range.
  Rational partner;
};

// Largest D such that every X in [0, D) has a distinct +/- residue set:
// min_U (lcm U + lcm U')/2 over all subsets U.
RangeWitness max_dynamic_range_witness(std::span<const Rational> moduli);
Rational max_dynamic_range_noiseless(std::span<const Rational> moduli);
// Moduli given as doubles must be exact decimals (up to 12 places).
double max_dynamic_range_noiseless(std::span<const double> moduli);

std::vector<double> apply_operation(std::span<const double> common, double gamma,
                                    OperationChoice choice);

// Every per-modulus choice of one of the two residues, both operations, the
// first criterion and q < D_q. Survivors are returned unmerged.
std::vector<RealDecodeSolution> decode_real_single(const ResidueObservation& obs,
                                                   const ModulusSet& moduli,
                                                   const ExecutionContext& ctx = {});

// r_plus[l], r_minus[l]: exact residues of X and -X modulo m_l. True iff
// they sit more than gamma apart on every ring.
bool real_separation_condition(std::span<const double> r_plus,
                               std::span<const double> r_minus, const ModulusSet& moduli);

// <x>_gamma within tol of 0 or gamma/2.
bool is_degenerate_common_residue(double x, double gamma, double tol = 1e-9);

// One criterion-passing cluster of the pooled multi-source search.
struct PoolEntry {
  double estimate;  // nonnegative representative of +/- estimate
  i64 q;
  std::vector<std::size_t> members;
  TauAssignment tau;
};

// All clusters (one of the 2N entries per modulus) with a tau cut that passes
// the first criterion and q < D_q, canonically ordered.
std::vector<PoolEntry> real_multi_cluster_pool(const ResidueObservation& obs,
                                               const ModulusSet& moduli,
                                               std::size_t n_sources,
                                               const ExecutionContext& ctx = {});

// Selections of N distinct pooled estimates whose +/- residues can be matched
// one-to-one with every ring's observed multiset. N = 1 runs the single
// decoder.
std::vector<RealDecodeSolution> decode_real_multi(const ResidueObservation& obs,
                                                  const ModulusSet& moduli,
                                                  std::size_t n_sources,
                                                  const ExecutionContext& ctx = {});

// Sorted distinct estimate vectors (equal within tol).
std::vector<std::vector<double>> distinct_estimates(
    const std::vector<RealDecodeSolution>& solutions, double tol = 1e-9);

}  // namespace remrec
