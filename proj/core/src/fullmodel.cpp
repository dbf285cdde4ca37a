#include "qexp/fullmodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qexp/errors.hpp"

namespace qexp {

using constants::hbar;

ReadoutConfig ReadoutConfig::from(const DetectorConfig& cfg) {
    ReadoutConfig r;
    r.homodyne_angle = cfg.homodyne_angle;
    r.efficiency = cfg.detection_efficiency;
    r.ext_squeeze = cfg.ext_squeeze;
    r.ext_squeeze_angle = cfg.ext_squeeze_angle;
    return r;
}

void ReadoutConfig::validate() const {
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw ConfigError("eta", "readout efficiency must lie in (0, 1]");
    if (!std::isfinite(homodyne_angle)) throw ConfigError("homodyne_angle", "homodyne angle must be finite");
    if (!std::isfinite(ext_squeeze)) throw ConfigError("ext_squeeze_db", "external squeezing must be finite");
    for (const auto& f : filters) {
        if (!(f.bandwidth > 0.0)) throw ConfigError("filter_bandwidth", "filter bandwidth must be positive");
        if (!std::isfinite(f.detuning)) throw ConfigError("filter_detuning", "filter detuning must be finite");
    }
}

double threshold_gain(const DetectorConfig& cfg) {
    const double loop = std::sqrt(1.0 - cfg.sem_transmission) * (1.0 - cfg.se_loss);
    if (loop <= 0.0) return std::numeric_limits<double>::infinity();
    return -0.5 * std::log(loop);
}

double gain_from_threshold_fraction(const DetectorConfig& cfg, double fraction) {
    return fraction * threshold_gain(cfg);
}

QuadVector carrier_vector(const DetectorConfig& cfg) {
    const double e0 = std::sqrt(cfg.circulating_power() / (hbar * cfg.carrier_frequency()));
    return {0.0, std::sqrt(2.0) * e0};
}

namespace {

// Relative size below which a resolvent determinant is treated as singular.
constexpr double kSingular = 1e-13;

bool near_singular(const QuadMatrix& m) {
    const double scale = m.frobenius();
    return std::abs(m.det()) <= kSingular * scale * scale;
}

QuadMatrix safe_inverse(const QuadMatrix& m, bool& singular) {
    if (near_singular(m)) singular = true;
    if (m.det() == 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {inf, inf, inf, inf};
    }
    return m.inverse();
}

struct Mirrors {
    double ri, ti, rs, ts, re, te;
};

Mirrors mirrors(const DetectorConfig& cfg) {
    return {std::sqrt(1.0 - cfg.itm_transmission), std::sqrt(cfg.itm_transmission),
            std::sqrt(1.0 - cfg.sem_transmission), std::sqrt(cfg.sem_transmission),
            std::sqrt(1.0 - cfg.etm_transmission), std::sqrt(cfg.etm_transmission)};
}

}  // namespace

SeCavityResponse se_cavity(const DetectorConfig& cfg, double omega) {
    const Mirrors mr = mirrors(cfg);
    const double loss = cfg.se_loss;
    const double rho = std::sqrt(1.0 - loss);
    const double sl = std::sqrt(loss);
    const double tau = cfg.se_trip_time();
    const QuadMatrix id = QuadMatrix::identity();

    SeCavityResponse se;
    se.to_itm = prop(cfg.se_phase_itm, cfg.se_phase_sem, cfg.crystal_angle, cfg.internal_squeeze, omega, tau);
    se.to_sem = prop(cfg.se_phase_sem, cfg.se_phase_itm, cfg.crystal_angle, cfg.internal_squeeze, omega, tau);
    const QuadMatrix& a1 = se.to_itm;
    const QuadMatrix& a2 = se.to_sem;

    const double k = mr.ri * mr.rs * (1.0 - loss);
    se.resolvent_b = safe_inverse(id + k * (a1 * a2), se.singular);
    se.resolvent_d = safe_inverse(id + k * (a2 * a1), se.singular);
    const QuadMatrix& db = se.resolvent_b;
    const QuadMatrix& dd = se.resolvent_d;

    const QuadMatrix round_b = a2 * db * a1;
    se.reflect_b = mr.rs * id + (mr.ri * mr.ts * mr.ts * (1.0 - loss)) * round_b;
    se.reflect_d = mr.ri * id + (mr.rs * mr.ti * mr.ti * (1.0 - loss)) * (a1 * dd * a2);
    se.transmit_b = (mr.ti * mr.ts * rho) * (a2 * db);
    se.transmit_d = (mr.ti * mr.ts * rho) * (a1 * dd);
    se.loss_b1 = (-mr.ri * mr.ts * rho * sl) * round_b;
    se.loss_b2 = (mr.ts * sl) * (id - (mr.ri * mr.rs * (1.0 - loss)) * round_b);
    se.loss_d1 = (mr.ti * sl) * (a1 * dd);
    se.loss_d2 = (mr.ti * mr.rs * rho * sl) * (a1 * dd);
    return se;
}

ArmCavityResponse arm_cavity(const DetectorConfig& cfg, double omega, const SeCavityResponse& se) {
    const Mirrors mr = mirrors(cfg);
    const double tau = cfg.arm_trip_time();
    const QuadMatrix id = QuadMatrix::identity();

    ArmCavityResponse arm;
    arm.detuning = rot(cfg.arm_detuning * tau);
    arm.trip_phase = std::exp(cplx(0.0, omega * tau));
    const cplx round = arm.trip_phase * arm.trip_phase;
    const QuadMatrix& od = arm.detuning;
    arm.resolvent_c = safe_inverse(id - (mr.re * round) * (od * od * se.reflect_d), arm.singular);
    arm.resolvent_e = safe_inverse(id - (mr.re * round) * (od * se.reflect_d * od), arm.singular);
    return arm;
}

PlantResponse plant_output(const DetectorConfig& cfg, double omega) {
    const Mirrors mr = mirrors(cfg);
    PlantResponse p;
    p.se = se_cavity(cfg, omega);
    p.arm = arm_cavity(cfg, omega, p.se);

    const QuadMatrix& od = p.arm.detuning;
    const cplx eps = p.arm.trip_phase;
    const QuadMatrix lead = p.se.transmit_b * p.arm.resolvent_c;  // T_b D_c
    const QuadMatrix back = lead * od * od * (mr.re * eps * eps);

    p.reflection = p.se.reflect_b - back * p.se.transmit_d;
    p.end_port = (mr.te * eps) * (lead * od);
    p.loss1 = p.se.loss_b1 + back * p.se.loss_d1;
    p.loss2 = p.se.loss_b2 + back * p.se.loss_d2;
    p.displacement = (2.0 * cfg.wavenumber() * mr.re * eps) * ((lead * od * rot(constants::pi / 2)) * carrier_vector(cfg));

    p.unstable = p.se.singular || p.arm.singular || std::abs(cfg.internal_squeeze) >= threshold_gain(cfg);
    return p;
}

const char* port_name(NoisePort p) {
    switch (p) {
        case NoisePort::input_vacuum: return "input_vacuum";
        case NoisePort::se_internal_loss_1: return "se_internal_loss_1";
        case NoisePort::se_internal_loss_2: return "se_internal_loss_2";
        case NoisePort::arm_loss: return "arm_loss";
        case NoisePort::readout_loss: return "readout_loss";
    }
    return "unknown";
}

namespace {

// Output (displacement-referred) and force rows of one vacuum port.
struct PortRows {
    QuadVector x;
    QuadVector f;
};

struct Assembly {
    std::array<PortRows, kNoisePortCount> rows{};
    cplx spring{0};
    cplx free_susceptibility{0};
    cplx effective_susceptibility{0};
    bool unstable = false;
};

Assembly assemble(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega) {
    cfg.validate();
    readout.validate();
    if (!(omega > 0.0)) throw std::domain_error("sideband frequency must be positive");

    const Mirrors mr = mirrors(cfg);
    const PlantResponse p = plant_output(cfg, omega);
    const QuadMatrix& od = p.arm.detuning;
    const cplx eps = p.arm.trip_phase;
    const QuadMatrix y = rot(constants::pi / 2);
    const QuadVector e = carrier_vector(cfg);
    const QuadVector e_row = conj(e);
    const double k = cfg.wavenumber();
    const double re2 = mr.re * mr.re;

    Assembly out;
    out.unstable = p.unstable;

    // Optical spring.
    const QuadMatrix de_arm = p.arm.resolvent_e * od * p.se.reflect_d * od;
    out.spring = -2.0 * hbar * k * k * (1.0 + re2) * mr.re * dot(row_times(e_row, de_arm * y), e) * eps * eps -
                 2.0 * hbar * k * k * re2 * dot(row_times(e_row, y), e);
    out.free_susceptibility = -1.0 / (cfg.mirror_mass * omega * omega);
    out.effective_susceptibility = 1.0 / (1.0 / out.free_susceptibility + out.spring);

    double ext_angle = readout.ext_squeeze_angle;
    double zeta = readout.homodyne_angle;
    for (const auto& f : readout.filters) {
        const double th = filter_angle(f.bandwidth, f.detuning, omega);
        if (f.placement == FilterPlacement::input)
            ext_angle += th;
        else
            zeta -= th;
    }
    const QuadMatrix s_ext = rot(ext_angle) * sqz(readout.ext_squeeze) * rot(-ext_angle);
    const QuadVector h{std::cos(zeta), std::sin(zeta)};

    const cplx hz = dot(h, p.displacement);
    const double zn = std::sqrt(norm2(p.displacement));
    if (!(std::abs(hz) > 1e-12 * zn))
        throw DegenerateReadout("homodyne angle is orthogonal to the signal", omega / constants::two_pi);

    const QuadVector f_pre = (hbar * k * (1.0 + re2) * eps) * row_times(e_row, p.arm.resolvent_e * od);
    const QuadMatrix arm_vac = (1.0 + re2) * eps * eps * de_arm + mr.re * QuadMatrix::identity();
    const double eta = readout.efficiency;

    auto& r = out.rows;
    r[0] = {(1.0 / hz) * row_times(h, -1.0 * (p.reflection * s_ext)), row_times(f_pre, p.se.transmit_d * s_ext)};
    r[1] = {(1.0 / hz) * row_times(h, p.loss1), row_times(f_pre, p.se.loss_d1)};
    r[2] = {(1.0 / hz) * row_times(h, p.loss2), row_times(f_pre, p.se.loss_d2)};
    r[3] = {(1.0 / hz) * row_times(h, p.end_port), (hbar * k * mr.te) * row_times(e_row, arm_vac)};
    r[4] = {(std::sqrt((1.0 - eta) / eta) / hz) * h, QuadVector{}};
    return out;
}

}  // namespace

BackAction back_action(const DetectorConfig& cfg, double omega) {
    return back_action(cfg, ReadoutConfig::from(cfg), omega);
}

BackAction back_action(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega) {
    const Assembly a = assemble(cfg, readout, omega);
    BackAction b;
    b.spring = a.spring;
    b.free_susceptibility = a.free_susceptibility;
    b.effective_susceptibility = a.effective_susceptibility;
    for (const auto& row : a.rows) {
        b.force_psd += norm2(row.f);
        b.cross_psd += dot(row.x, conj(row.f));
    }
    return b;
}

HomodyneSpectra homodyne_psd(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega) {
    const Assembly a = assemble(cfg, readout, omega);
    const cplx chi = a.effective_susceptibility;
    HomodyneSpectra s;
    s.effective_susceptibility = chi;
    s.unstable = a.unstable;
    for (int i = 0; i < kNoisePortCount; ++i) {
        const PortRows& row = a.rows[i];
        s.shot += norm2(row.x);
        s.force += norm2(row.f);
        s.cross += dot(row.x, conj(row.f));
        s.per_port[i] = norm2(row.x + chi * row.f);
        s.displacement += s.per_port[i];
    }
    return s;
}

double strain_scale(const DetectorConfig& cfg, double omega, cplx effective_susceptibility) {
    const double m = cfg.mirror_mass;
    const double l = cfg.arm_length;
    const double x = omega * cfg.arm_trip_time();
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    const double w2 = omega * omega;
    return 1.0 / (m * m * l * l * w2 * w2 * std::norm(effective_susceptibility)) / (sinc * sinc);
}

double strain_psd_full(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega) {
    const HomodyneSpectra s = homodyne_psd(cfg, readout, omega);
    return s.displacement * strain_scale(cfg, omega, s.effective_susceptibility);
}

double sql_psd(const DetectorConfig& cfg, double omega) {
    const double l = cfg.arm_length;
    return 2.0 * hbar / (cfg.mirror_mass * omega * omega * l * l);
}

double filter_angle(double bandwidth, double detuning, double omega) {
    if (!(bandwidth > 0.0)) throw std::domain_error("filter bandwidth must be positive");
    return std::atan2(2.0 * bandwidth * detuning,
                      bandwidth * bandwidth - detuning * detuning + omega * omega);
}

}  // namespace qexp
