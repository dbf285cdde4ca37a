#include "qexp/budget.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qexp/spectrum.hpp"

namespace qexp {

NoiseBudget decompose(const DetectorConfig& cfg, const ReadoutConfig& readout,
                      const std::vector<double>& grid_hz) {
    NoiseBudget b;
    b.frequency_hz = grid_hz;
    b.total.resize(grid_hz.size());
    for (auto& c : b.contribution) c.resize(grid_hz.size());

    for (std::size_t i = 0; i < grid_hz.size(); ++i) {
        const double omega = constants::two_pi * grid_hz[i];
        const HomodyneSpectra s = homodyne_psd(cfg, readout, omega);
        const double scale = strain_scale(cfg, omega, s.effective_susceptibility);
        double total = 0.0;
        for (int p = 0; p < kNoisePortCount; ++p) {
            b.contribution[p][i] = s.per_port[p] * scale;
            total += b.contribution[p][i];
        }
        b.total[i] = total;
    }
    return b;
}

double caves_snr(double eta, double r, double q) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("caves_snr: eta must lie in (0, 1]");
    if (!(r >= 0.0) || !(q >= 0.0)) throw std::domain_error("caves_snr: r and q must be non-negative");
    // eta e^{2q} / (1 - eta (1 - e^{-2r} e^{2q})), rearranged to stay finite for large q.
    return eta / ((1.0 - eta) * std::exp(-2.0 * q) + eta * std::exp(-2.0 * r));
}

double band_sensitivity(const DetectorConfig& cfg, const ReadoutConfig& readout, const Band& band) {
    const std::vector<double> f = linear_grid(band.f_min_hz, band.f_max_hz, band.points);
    std::vector<double> inv(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        inv[i] = 1.0 / strain_psd_full(cfg, readout, constants::two_pi * f[i]);
    return trapezoid(f, inv);
}

DetectorConfig with_total_loss(DetectorConfig cfg, double total_loss, double internal_share) {
    if (!(total_loss >= 0.0 && total_loss < 1.0)) throw std::domain_error("total loss must lie in [0, 1)");
    if (!(internal_share >= 0.0 && internal_share <= 1.0))
        throw std::domain_error("internal loss share must lie in [0, 1]");
    cfg.se_loss = internal_share * total_loss;
    cfg.detection_efficiency = 1.0 - (1.0 - internal_share) * total_loss;
    return cfg;
}

namespace {

double with_gain(DetectorConfig cfg, const ReadoutConfig& readout, const Band& band, double fraction) {
    cfg.internal_squeeze = gain_from_threshold_fraction(cfg, fraction);
    return band_sensitivity(cfg, readout, band);
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace

BenefitMap benefit_map(const DetectorConfig& cfg_base, const std::vector<double>& loss_grid,
                       double ext_squeeze, const std::vector<double>& gain_grid, const Band& band,
                       double internal_share) {
    if (loss_grid.empty() || gain_grid.empty()) throw std::invalid_argument("benefit_map: empty grid");
    BenefitMap m;
    m.total_loss = loss_grid;
    m.gain_fraction = gain_grid;
    m.improvement_db.reserve(loss_grid.size() * gain_grid.size());

    for (double loss : loss_grid) {
        DetectorConfig cfg = with_total_loss(cfg_base, loss, internal_share);
        cfg.ext_squeeze = ext_squeeze;
        const ReadoutConfig readout = ReadoutConfig::from(cfg);
        const double ref = with_gain(cfg, readout, band, 0.0);

        double best = -std::numeric_limits<double>::infinity();
        double best_gain = 0.0;
        for (double g : gain_grid) {
            const double db = g == 0.0 ? 0.0 : to_db(with_gain(cfg, readout, band, g) / ref);
            m.improvement_db.push_back(db);
            if (db > best) {
                best = db;
                best_gain = g;
            }
        }
        m.best_gain_fraction.push_back(best_gain);
        m.best_improvement_db.push_back(best);
    }
    return m;
}

GainOptimum optimize_gain(const DetectorConfig& cfg, const ReadoutConfig& readout, const Band& band,
                          const GainSearch& search) {
    if (search.coarse_points < 3 || !(search.upper > 0.0))
        throw std::invalid_argument("optimize_gain: bad search settings");
    const double ref = with_gain(cfg, readout, band, 0.0);
    auto objective = [&](double x) { return with_gain(cfg, readout, band, x); };

    const std::size_t n = search.coarse_points;
    std::vector<double> xs(n), ys(n);
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = search.upper * static_cast<double>(i) / static_cast<double>(n - 1);
        ys[i] = i == 0 ? ref : objective(xs[i]);
        if (ys[i] > ys[best]) best = i;
    }

    if (to_db(ys[best] / ref) < search.flat_db) return {0.0, to_db(ys[best] / ref), true};

    // Golden-section refinement inside the neighbouring coarse cells.
    double lo = xs[best == 0 ? 0 : best - 1];
    double hi = xs[best + 1 < n ? best + 1 : n - 1];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > search.tolerance) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        }
    }
    double x = 0.5 * (lo + hi);
    double fx = objective(x);
    // The coarse winner can beat the bracket midpoint at a boundary optimum.
    if (ys[best] > fx) {
        x = xs[best];
        fx = ys[best];
    }
    return {x, to_db(fx / ref), false};
}

}  // namespace qexp
