#pragma once

#include "qimsim/detection.hpp"

namespace qimsim::ref {

/// Plain serial implementations of the parallel kernels, written as direct
/// transcriptions of the defining sums. They are kept for testing (the
/// parallel kernels must agree with them) and for the speedup benchmark;
/// nothing in the library calls them.

TransferMatrix arm_transfer(const ArmSpec& arm, const WaveContext& ctx,
                            const Axis& mode_axis, const Axis& grid);

AmplitudeMap biphoton_amplitude(const TransferMatrix& ga, const TransferMatrix& gb,
                                const BiphotonSource& src);

Pattern classical_coincidence(const ClassicalEnsemble& ens,
                              const TransferMatrix& ga, const TransferMatrix& gb,
                              bool normalized = true);

KlyshkoResult klyshko_mc(const RandomPhaseEnsemble& ens, const TransferMatrix& ga,
                         const TransferMatrix& gb, int n_realizations,
                         bool normalized = true);

}  // namespace qimsim::ref
