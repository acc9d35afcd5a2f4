// polaron_rates.cpp — Rate kernels, assembly and the (Omega_R, Delta) lookup table

#include "sitqd/polaron_rates.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "sitqd/error.hpp"

namespace sitqd {

namespace {

// Below this eta*dtau the integrands are resolved by the phi grid and plain composite
// Simpson is used; above it Filon's rule integrates cos/sin(eta tau) exactly against
// the piecewise-quadratic interpolant (it reduces to Simpson as eta*dtau -> 0).
constexpr double filon_threshold = 0.05;

double simpson_weight(std::size_t i, std::size_t last) {
    if (i == 0 || i == last) {
        return 1.0;
    }
    return (i % 2 == 1) ? 4.0 : 2.0;
}

struct FilonCoefficients {
    double alpha, beta, gamma;
};

FilonCoefficients filon_coefficients(double theta) {
    if (theta < 0.25) {
        const double t2 = theta * theta;
        const double t3 = t2 * theta;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        return {2.0 * t3 / 45.0 - 2.0 * t3 * t2 / 315.0 + 2.0 * t3 * t4 / 4725.0,
                2.0 / 3.0 + 2.0 * t2 / 15.0 - 4.0 * t4 / 105.0 + 2.0 * t6 / 567.0,
                4.0 / 3.0 - 2.0 * t2 / 15.0 + t4 / 210.0 - t6 / 11340.0};
    }
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double t3 = theta * theta * theta;
    return {(theta * theta + theta * s * c - 2.0 * s * s) / t3,
            2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3,
            4.0 * (s - theta * c) / t3};
}

// Accumulates the even/odd partial sums of A_i cos(k tau_i) and A_i sin(k tau_i).
struct FilonSums {
    double c_even{0.0}, c_odd{0.0}, s_even{0.0}, s_odd{0.0};
    double a_first{0.0}, a_last{0.0};

    void add(std::size_t i, double a, double c, double s) {
        if (i % 2 == 0) {
            c_even += a * c;
            s_even += a * s;
        } else {
            c_odd += a * c;
            s_odd += a * s;
        }
    }
};

struct FilonResult {
    double cos_integral, sin_integral;
};

FilonResult filon_finish(const FilonSums& sums, const FilonCoefficients& co, double h,
                         double cos_last, double sin_last) {
    // tau_0 = 0, so cos = 1 and sin = 0 at the first node.
    const double c2n = sums.c_even - 0.5 * (sums.a_last * cos_last + sums.a_first);
    const double s2n = sums.s_even - 0.5 * (sums.a_last * sin_last);
    const double ic = h * (co.alpha * (sums.a_last * sin_last) + co.beta * c2n + co.gamma * sums.c_odd);
    const double is = h * (co.alpha * (sums.a_first - sums.a_last * cos_last) + co.beta * s2n +
                           co.gamma * sums.s_odd);
    return {ic, is};
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) {
        bytes[b] = static_cast<unsigned char>((v >> (8 * b)) & 0xffu);
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw std::runtime_error("rate table cache: truncated file");
    }
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
        v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    }
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

constexpr char cache_magic[8] = {'S', 'I', 'T', 'Q', 'D', 'R', 'T', '1'};

} // namespace

double generalized_rabi(double omega_r, double delta) { return std::hypot(omega_r, delta); }

KernelIntegrands::KernelIntegrands(const CorrelationTable& corr) : tau_step_(corr.tau_step()) {
    const auto phi = corr.phi();
    re_cosh_.resize(phi.size());
    re_sinh_.resize(phi.size());
    im_exp_.resize(phi.size());
    re_exp_.resize(phi.size());
    re_expm_.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const Complex e = std::exp(phi[i]);
        const Complex em = std::exp(-phi[i]);
        re_cosh_[i] = (0.5 * (e + em) - 1.0).real();
        re_sinh_[i] = (0.5 * (e - em)).real();
        im_exp_[i] = (e - 1.0).imag();
        re_exp_[i] = (e - 1.0).real();
        re_expm_[i] = (em - 1.0).real();
    }
}

RateKernels compute_kernels(double omega_r, double delta, const CorrelationTable& corr) {
    return compute_kernels(omega_r, delta, KernelIntegrands(corr));
}

RateKernels compute_kernels(double omega_r, double delta, const KernelIntegrands& in) {
    if (!(omega_r >= 0.0)) {
        throw std::invalid_argument("compute_kernels: omega_r must be >= 0");
    }
    const std::size_t n = in.size();
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("compute_kernels: tau grid needs an even number of intervals");
    }
    const std::size_t last = n - 1;
    const double h = in.tau_step();
    const double eta = generalized_rabi(omega_r, delta);

    const auto re_cosh = in.re_cosh();
    const auto re_sinh = in.re_sinh();
    const auto im_exp = in.im_exp();
    const auto re_exp = in.re_exp();
    const auto re_expm = in.re_expm();

    RateKernels out{omega_r, delta, {}};
    auto& k = out.values;
    auto at = [&k](Kernel which) -> double& { return k[static_cast<std::size_t>(which)]; };

    if (eta == 0.0) {
        double cosh_sum = 0.0, sinh_sum = 0.0, sinh_tau = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = simpson_weight(i, last);
            const double tau = h * static_cast<double>(i);
            cosh_sum += w * re_cosh[i];
            sinh_sum += w * re_sinh[i];
            sinh_tau += w * re_sinh[i] * tau;
        }
        at(Kernel::cosh_f) = cosh_sum * h / 3.0;
        at(Kernel::sinh_cos) = sinh_sum * h / 3.0;
        at(Kernel::sinh_sin) = sinh_tau * h / 3.0;
        return out;
    }

    const double inv_eta = 1.0 / eta;
    const double inv_eta2 = inv_eta * inv_eta;
    const double d_over_eta = delta * inv_eta;

    if (eta * h <= filon_threshold) {
        double cosh_f = 0.0, sinh_cos = 0.0, exp_sin = 0.0, expm_sin = 0.0, exp_sin_re = 0.0,
               cosh_h = 0.0, sinh_sin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = simpson_weight(i, last);
            const double x = eta * h * static_cast<double>(i);
            const double c = std::cos(x);
            const double s = std::sin(x);
            const double half_s = std::sin(0.5 * x);
            const double f = (delta * delta * c + omega_r * omega_r) * inv_eta2;
            const double hh = 2.0 * delta * half_s * half_s * inv_eta2;
            const double sinc = s * inv_eta;
            cosh_f += w * re_cosh[i] * f;
            sinh_cos += w * re_sinh[i] * c;
            exp_sin += w * im_exp[i] * delta * sinc;
            expm_sin += w * re_expm[i] * delta * sinc;
            exp_sin_re += w * re_exp[i] * delta * sinc;
            cosh_h += w * re_cosh[i] * hh;
            sinh_sin += w * re_sinh[i] * sinc;
        }
        const double scale = h / 3.0;
        at(Kernel::cosh_f) = cosh_f * scale;
        at(Kernel::sinh_cos) = sinh_cos * scale;
        at(Kernel::exp_sin) = exp_sin * scale;
        at(Kernel::expm_sin) = expm_sin * scale;
        at(Kernel::exp_sin_re) = exp_sin_re * scale;
        at(Kernel::cosh_h) = cosh_h * scale;
        at(Kernel::sinh_sin) = sinh_sin * scale;
        return out;
    }

    FilonSums f_cosh, f_sinh, f_imexp, f_expm, f_reexp;
    double cosh_plain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = eta * h * static_cast<double>(i);
        const double c = std::cos(x);
        const double s = std::sin(x);
        f_cosh.add(i, re_cosh[i], c, s);
        f_sinh.add(i, re_sinh[i], c, s);
        f_imexp.add(i, im_exp[i], c, s);
        f_expm.add(i, re_expm[i], c, s);
        f_reexp.add(i, re_exp[i], c, s);
        cosh_plain += simpson_weight(i, last) * re_cosh[i];
    }
    for (auto* sums : {&f_cosh, &f_sinh, &f_imexp, &f_expm, &f_reexp}) {
        sums->a_first = 0.0;
        sums->a_last = 0.0;
    }
    f_cosh.a_first = re_cosh[0];
    f_cosh.a_last = re_cosh[last];
    f_sinh.a_first = re_sinh[0];
    f_sinh.a_last = re_sinh[last];
    f_imexp.a_first = im_exp[0];
    f_imexp.a_last = im_exp[last];
    f_expm.a_first = re_expm[0];
    f_expm.a_last = re_expm[last];
    f_reexp.a_first = re_exp[0];
    f_reexp.a_last = re_exp[last];

    const double x_last = eta * h * static_cast<double>(last);
    const double cos_last = std::cos(x_last);
    const double sin_last = std::sin(x_last);
    const auto co = filon_coefficients(eta * h);

    const auto cosh_int = filon_finish(f_cosh, co, h, cos_last, sin_last);
    const auto sinh_int = filon_finish(f_sinh, co, h, cos_last, sin_last);
    const auto imexp_int = filon_finish(f_imexp, co, h, cos_last, sin_last);
    const auto expm_int = filon_finish(f_expm, co, h, cos_last, sin_last);
    const auto reexp_int = filon_finish(f_reexp, co, h, cos_last, sin_last);
    cosh_plain *= h / 3.0;

    at(Kernel::cosh_f) = (delta * delta * cosh_int.cos_integral + omega_r * omega_r * cosh_plain) *
                         inv_eta2;
    at(Kernel::sinh_cos) = sinh_int.cos_integral;
    at(Kernel::exp_sin) = d_over_eta * imexp_int.sin_integral;
    at(Kernel::expm_sin) = d_over_eta * expm_int.sin_integral;
    at(Kernel::exp_sin_re) = d_over_eta * reexp_int.sin_integral;
    at(Kernel::cosh_h) = delta * inv_eta2 * (cosh_plain - cosh_int.cos_integral);
    at(Kernel::sinh_sin) = inv_eta * sinh_int.sin_integral;
    return out;
}

namespace detail {

PhononRates combine(Complex omega_eff, const KernelValues& k) noexcept {
    const double re = omega_eff.real();
    const double im = omega_eff.imag();
    const double half_r2 = 0.5 * (re * re + im * im);
    const double omega_s = re * re - im * im;
    const double omega_t = 2.0 * re * im;

    const double cosh_f = k[static_cast<std::size_t>(Kernel::cosh_f)];
    const double sinh_cos = k[static_cast<std::size_t>(Kernel::sinh_cos)];
    const double exp_sin = k[static_cast<std::size_t>(Kernel::exp_sin)];
    const double expm_sin = k[static_cast<std::size_t>(Kernel::expm_sin)];
    const double exp_sin_re = k[static_cast<std::size_t>(Kernel::exp_sin_re)];
    const double cosh_h = k[static_cast<std::size_t>(Kernel::cosh_h)];
    const double sinh_sin = k[static_cast<std::size_t>(Kernel::sinh_sin)];

    PhononRates r;
    r.gamma_plus = half_r2 * (cosh_f + sinh_cos - exp_sin);
    r.gamma_minus = half_r2 * (cosh_f + sinh_cos + exp_sin);
    r.gamma_cd = 0.5 * (omega_s * (sinh_cos - cosh_f) + omega_t * expm_sin);
    r.gamma_sd = 0.5 * (omega_t * (sinh_cos - cosh_f) - omega_s * expm_sin);
    r.delta_pm = half_r2 * exp_sin_re;
    r.gamma_gu_plus = half_r2 * (im * cosh_h + re * sinh_sin);
    r.gamma_gu_minus = half_r2 * (re * cosh_h - im * sinh_sin);
    return r;
}

} // namespace detail

PhononRates assemble_rates(Complex omega, double delta, const RateKernels& kernels, double mean_B) {
    const double omega_r = mean_B * std::abs(omega);
    const double tol_r = 1e-9 * std::max(1.0, omega_r);
    const double tol_d = 1e-12 * std::max(1.0, std::abs(delta));
    if (std::abs(kernels.omega_r - omega_r) > tol_r || std::abs(kernels.delta - delta) > tol_d) {
        throw std::invalid_argument(
            "assemble_rates: kernels were evaluated at a different (Omega_R, Delta)");
    }
    return detail::combine(mean_B * omega, kernels.values);
}

RateTable RateTable::build(const RateTableSpec& spec, const CorrelationTable& corr,
                           unsigned threads) {
    if (spec.n_omega < 2 || spec.n_delta < 2) {
        throw std::invalid_argument("RateTable: resolution must be >= 2 per axis");
    }
    if (!(spec.omega_max > 0.0) || !(spec.delta_span > 0.0) || !(spec.delta_scale > 0.0)) {
        throw std::invalid_argument("RateTable: omega_max, delta_span and delta_scale must be > 0");
    }

    RateTable table;
    table.spec_ = spec;
    table.bath_ = corr.params();
    table.mean_B_ = corr.mean_B();

    table.omega_axis_.resize(spec.n_omega);
    const double omega_step = spec.omega_max / static_cast<double>(spec.n_omega - 1);
    for (std::size_t i = 0; i < spec.n_omega; ++i) {
        table.omega_axis_[i] = omega_step * static_cast<double>(i);
    }
    table.omega_axis_.back() = spec.omega_max;

    table.delta_axis_.resize(spec.n_delta);
    const double u_max = table.delta_u_max();
    const double du = 2.0 * u_max / static_cast<double>(spec.n_delta - 1);
    for (std::size_t j = 0; j < spec.n_delta; ++j) {
        table.delta_axis_[j] = spec.delta_scale * std::sinh(-u_max + du * static_cast<double>(j));
    }
    // Exact symmetry and exact endpoints.
    for (std::size_t j = 0; j < spec.n_delta / 2; ++j) {
        table.delta_axis_[spec.n_delta - 1 - j] = -table.delta_axis_[j];
    }
    if (spec.n_delta % 2 == 1) {
        table.delta_axis_[spec.n_delta / 2] = 0.0;
    }
    table.delta_axis_.front() = -spec.delta_span;
    table.delta_axis_.back() = spec.delta_span;

    for (auto& g : table.grids_) {
        g.assign(spec.n_omega * spec.n_delta, 0.0);
    }

    const KernelIntegrands integrands(corr);
    detail::parallel_for(spec.n_omega, threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < spec.n_delta; ++j) {
            const auto k = compute_kernels(table.omega_axis_[i], table.delta_axis_[j], integrands);
            for (std::size_t q = 0; q < kernel_count; ++q) {
                table.grids_[q][i * spec.n_delta + j] = k.values[q];
            }
        }
    });
    return table;
}

double RateTable::delta_u_max() const noexcept {
    return std::asinh(spec_.delta_span / spec_.delta_scale);
}

RateKernels RateTable::node(std::size_t i_omega, std::size_t j_delta) const {
    if (i_omega >= spec_.n_omega || j_delta >= spec_.n_delta) {
        throw std::out_of_range("RateTable::node: index out of range");
    }
    RateKernels k{omega_axis_[i_omega], delta_axis_[j_delta], {}};
    for (std::size_t q = 0; q < kernel_count; ++q) {
        k.values[q] = grids_[q][i_omega * spec_.n_delta + j_delta];
    }
    return k;
}

RateTable::Cell RateTable::omega_cell(double omega_r) const {
    if (!(omega_r >= 0.0) || omega_r > spec_.omega_max * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "Omega_R = " << omega_r << " rad/ps outside table range [0, " << spec_.omega_max
            << "]";
        throw RangeError("omega_r", msg.str());
    }
    const double x = omega_r / spec_.omega_max * static_cast<double>(spec_.n_omega - 1);
    auto i = static_cast<std::size_t>(x);
    if (i >= spec_.n_omega - 1) {
        i = spec_.n_omega - 2;
    }
    return {i, std::min(1.0, x - static_cast<double>(i))};
}

RateTable::Cell RateTable::delta_cell(double delta) const {
    if (!(std::abs(delta) <= spec_.delta_span * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "Delta = " << delta << " rad/ps outside table range [-" << spec_.delta_span << ", "
            << spec_.delta_span << "]";
        throw RangeError("delta", msg.str());
    }
    const double u_max = delta_u_max();
    const double u = std::asinh(delta / spec_.delta_scale);
    const double x = (u + u_max) / (2.0 * u_max) * static_cast<double>(spec_.n_delta - 1);
    auto j = static_cast<std::size_t>(std::max(0.0, x));
    if (j >= spec_.n_delta - 1) {
        j = spec_.n_delta - 2;
    }
    return {j, std::clamp(x - static_cast<double>(j), 0.0, 1.0)};
}

RateColumn RateTable::column(double delta) const {
    const Cell dc = delta_cell(delta);
    RateColumn col;
    col.delta_ = delta;
    col.omega_max_ = spec_.omega_max;
    col.omega_step_ = spec_.omega_max / static_cast<double>(spec_.n_omega - 1);
    col.values_.resize(spec_.n_omega);
    for (std::size_t i = 0; i < spec_.n_omega; ++i) {
        const std::size_t base = i * spec_.n_delta + dc.index;
        for (std::size_t q = 0; q < kernel_count; ++q) {
            const auto& g = grids_[q];
            col.values_[i][q] = (1.0 - dc.frac) * g[base] + dc.frac * g[base + 1];
        }
    }
    return col;
}

KernelValues RateColumn::kernels(double omega_r) const {
    if (!(omega_r >= 0.0) || omega_r > omega_max_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "Omega_R = " << omega_r << " rad/ps outside table range [0, " << omega_max_ << "]";
        throw RangeError("omega_r", msg.str());
    }
    const double x = omega_r / omega_step_;
    auto i = static_cast<std::size_t>(x);
    if (i >= values_.size() - 1) {
        i = values_.size() - 2;
    }
    const double s = std::min(1.0, x - static_cast<double>(i));
    KernelValues out;
    for (std::size_t q = 0; q < kernel_count; ++q) {
        out[q] = (1.0 - s) * values_[i][q] + s * values_[i + 1][q];
    }
    return out;
}

RateKernels RateTable::interpolate(double omega_r, double delta) const {
    const Cell dc = delta_cell(delta);
    const Cell oc = omega_cell(omega_r);
    RateKernels out{omega_r, delta, {}};
    const std::size_t b0 = oc.index * spec_.n_delta + dc.index;
    const std::size_t b1 = b0 + spec_.n_delta;
    for (std::size_t q = 0; q < kernel_count; ++q) {
        const auto& g = grids_[q];
        const double c0 = (1.0 - dc.frac) * g[b0] + dc.frac * g[b0 + 1];
        const double c1 = (1.0 - dc.frac) * g[b1] + dc.frac * g[b1 + 1];
        out.values[q] = (1.0 - oc.frac) * c0 + oc.frac * c1;
    }
    return out;
}

PhononRates lookup_rates(const RateTable& table, Complex omega, double delta, double mean_B) {
    const auto k = table.interpolate(mean_B * std::abs(omega), delta);
    return detail::combine(mean_B * omega, k.values);
}

void RateTable::save(std::ostream& out) const {
    out.write(cache_magic, sizeof cache_magic);
    put_u64(out, spec_.n_omega);
    put_u64(out, spec_.n_delta);
    put_f64(out, spec_.omega_max);
    put_f64(out, spec_.delta_span);
    put_f64(out, spec_.delta_scale);
    put_f64(out, bath_.alpha_p);
    put_f64(out, bath_.omega_b);
    put_f64(out, bath_.temperature);
    put_f64(out, mean_B_);
    for (double v : omega_axis_) {
        put_f64(out, v);
    }
    for (double v : delta_axis_) {
        put_f64(out, v);
    }
    for (const auto& g : grids_) {
        for (double v : g) {
            put_f64(out, v);
        }
    }
    if (!out) {
        throw std::runtime_error("rate table cache: write failed");
    }
}

RateTable RateTable::load(std::istream& in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, cache_magic, 8) != 0) {
        throw std::runtime_error("rate table cache: bad magic");
    }
    RateTable t;
    t.spec_.n_omega = get_u64(in);
    t.spec_.n_delta = get_u64(in);
    if (t.spec_.n_omega < 2 || t.spec_.n_delta < 2 || t.spec_.n_omega > (1u << 20) ||
        t.spec_.n_delta > (1u << 20)) {
        throw std::runtime_error("rate table cache: implausible dimensions");
    }
    t.spec_.omega_max = get_f64(in);
    t.spec_.delta_span = get_f64(in);
    t.spec_.delta_scale = get_f64(in);
    t.bath_.alpha_p = get_f64(in);
    t.bath_.omega_b = get_f64(in);
    t.bath_.temperature = get_f64(in);
    t.mean_B_ = get_f64(in);
    t.omega_axis_.resize(t.spec_.n_omega);
    for (auto& v : t.omega_axis_) {
        v = get_f64(in);
    }
    t.delta_axis_.resize(t.spec_.n_delta);
    for (auto& v : t.delta_axis_) {
        v = get_f64(in);
    }
    for (auto& g : t.grids_) {
        g.resize(t.spec_.n_omega * t.spec_.n_delta);
        for (auto& v : g) {
            v = get_f64(in);
        }
    }
    return t;
}

void RateTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("rate table cache: cannot open " + path.string());
    }
    save(out);
}

RateTable RateTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("rate table cache: cannot open " + path.string());
    }
    return load(in);
}

std::string rate_table_cache_key(const PhononBathParams& bath, const RateTableSpec& spec) {
    // FNV-1a over the raw bit patterns of every defining number.
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&hash](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            hash ^= (v >> (8 * b)) & 0xffu;
            hash *= 0x100000001b3ull;
        }
    };
    mix(std::bit_cast<std::uint64_t>(bath.alpha_p));
    mix(std::bit_cast<std::uint64_t>(bath.omega_b));
    mix(std::bit_cast<std::uint64_t>(bath.temperature));
    mix(spec.n_omega);
    mix(spec.n_delta);
    mix(std::bit_cast<std::uint64_t>(spec.omega_max));
    mix(std::bit_cast<std::uint64_t>(spec.delta_span));
    mix(std::bit_cast<std::uint64_t>(spec.delta_scale));
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << hash;
    return s.str();
}

} // namespace sitqd
