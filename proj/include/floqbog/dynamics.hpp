#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "floqbog/errors.hpp"
#include "floqbog/floquet.hpp"
#include "floqbog/model.hpp"

namespace floqbog {

/// Applies -i Sz H_chain(t) to a block of Nambu vectors without forming H.
class ChainGenerator {
public:
    ChainGenerator(const ModelParams& params, int cells);

    int cells() const { return m_cells; }
    Eigen::Index sites() const { return 2 * m_cells; }
    void operator()(double t, const Eigen::MatrixXcd& u, Eigen::MatrixXcd& du) const;

private:
    ModelParams m_params;
    int m_cells;
};

Monodromy chain_monodromy(const ModelParams& params, int cells, const FloquetOptions& opts = {});

struct ChainSpectrum {
    int cells = 0;
    double omega = 1.0;
    std::vector<QuasienergyBranch> branches; ///< 2N branches
    std::vector<double> edge_weights;        ///< per branch, outer 10% of sites
    double sympl_residual = 0.0;
    bool defective = false;
};

ChainSpectrum chain_spectrum(const ModelParams& params, int cells, const FloquetOptions& opts = {});

/// Share of |psi|^2 (particle + hole) on the outer ceil(fraction N) sites at each end.
double edge_weight(const Eigen::VectorXcd& state, double fraction = 0.1);

/// Full width of the bulk quasienergy gap around Re eps = 0: 2 min_k min_i |Re eps|.
double bulk_gap_at_zero(const ModelParams& params, int nk, const FloquetOptions& opts = {});

struct MidgapSet {
    std::vector<int> indices; ///< into ChainSpectrum::branches
    double window = 0.0;
    int left = 0;  ///< states localized at the first boundary
    int right = 0; ///< states localized at the second boundary
};

/// States with |Re eps| < window and edge weight above edge_threshold. The
/// per-boundary split diagonalizes the left-half projector inside the midgap
/// subspace, so hybridized left/right combinations are counted correctly.
MidgapSet detect_midgap(const ChainSpectrum& spectrum, double window, double edge_threshold = 0.5);

struct EvolutionTrace {
    int cells = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> occupations; ///< [sample][site]
    std::vector<double> sympl_residual;           ///< max of |AA^dag - BB^dag - 1| and |AB^T - (AB^T)^T|
    bool truncated = false;                       ///< stopped once an occupation exceeded 1e12
};

/// Vacuum evolution of the open chain; t_max in drive periods, samples uniform in time.
EvolutionTrace evolve_vacuum(const ModelParams& params, int cells, double t_max_periods, int n_samples,
                             int steps_per_period);

/// CSV with columns t, n_1 ... n_N, sympl_residual.
void write_trace_csv(std::ostream& out, const EvolutionTrace& trace);

class NoExponentialRegime : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct FitWindow {
    double t_begin = 0.0;
    double t_end = 0.0;
};

/// Least-squares slope of ln n_site(t) over the window (site is a 0-based index).
double growth_rate_fit(const EvolutionTrace& trace, int site, FitWindow window);

struct NudgeCandidate {
    ModelParams params;
    int unstable_midgap = 0;
    double bulk_max_im = 0.0;
};

/// Random perturbations of `base` (uniform within +-radius on the hopping
/// amplitudes and mu), evaluated on a chain; best candidates first: most
/// unstable midgap states, then the most stable bulk.
std::vector<NudgeCandidate> nudge_search(const ModelParams& base, int cells, double radius, int trials,
                                         std::uint64_t seed, const FloquetOptions& opts = {});

} // namespace floqbog
