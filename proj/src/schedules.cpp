#include "kmit/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace kmit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

ScalarSchedule ScalarSchedule::constant(double value) {
    ScalarSchedule s;
    s.kind_ = Kind::Constant;
    s.value_ = value;
    return s;
}

ScalarSchedule ScalarSchedule::ramp(double value) {
    ScalarSchedule s;
    s.kind_ = Kind::Ramp;
    s.value_ = value;
    return s;
}

ScalarSchedule ScalarSchedule::prefix(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("ScalarSchedule::prefix: empty value list");
    ScalarSchedule s;
    s.kind_ = Kind::Prefix;
    s.values_ = std::move(values);
    s.value_ = s.values_.back();
    return s;
}

double ScalarSchedule::at(int k) const {
    if (k < 1) throw std::domain_error("ScalarSchedule::at: index must be >= 1");
    switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Ramp: return (1.0 - 1.0 / k) * value_;
    case Kind::Prefix: {
        auto i = static_cast<std::size_t>(k - 1);
        return i < values_.size() ? values_[i] : values_.back();
    }
    }
    return value_;
}

double ScalarSchedule::limit() const {
    if (!has_known_limit())
        throw std::logic_error("ScalarSchedule::limit: prefix schedule has no declared limit");
    return value_;
}

std::string ScalarSchedule::kind_name() const {
    switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::Ramp: return "ramp";
    case Kind::Prefix: return "prefix";
    }
    return "constant";
}

std::string ScalarSchedule::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::Prefix)
        os << "prefix[" << values_.size() << "]";
    else
        os << kind_name() << " " << value_;
    return os.str();
}

double ParameterSchedule::mu_at(int k) const {
    return mu(alpha_at(k), beta_at(k), lambda_at(k));
}

double ParameterSchedule::nu_at(int k) const { return nu(lambda_at(k)); }

bool ParameterSchedule::has_known_limits() const {
    bool ok = alpha.has_known_limit() && beta.has_known_limit() && lambda.has_known_limit();
    if (q) ok = ok && q->has_known_limit();
    return ok;
}

ParameterSchedule ParameterSchedule::constants(double alpha, double beta, double lambda,
                                               std::optional<double> q) {
    ParameterSchedule s;
    s.alpha = ScalarSchedule::constant(alpha);
    s.beta = ScalarSchedule::constant(beta);
    s.lambda = ScalarSchedule::constant(lambda);
    if (q) s.q = ScalarSchedule::constant(*q);
    return s;
}

ParameterSchedule ParameterSchedule::parse(const std::string& text) {
    double value[4] = {0.0, 0.0, 0.5, 1.0};
    bool ramp[4] = {false, false, false, false};
    bool has_q = false;

    auto key_index = [](const std::string& key) -> int {
        if (key == "alpha") return 0;
        if (key == "beta") return 1;
        if (key == "lambda") return 2;
        if (key == "q") return 3;
        return -1;
    };

    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("ParameterSchedule::parse: expected key=value, got '" + token + "'");
        std::string key = trim(token.substr(0, eq));
        std::string val = trim(token.substr(eq + 1));
        bool kind_key = key.size() > 5 && key.compare(key.size() - 5, 5, "_kind") == 0;
        if (kind_key) key = key.substr(0, key.size() - 5);
        int idx = key_index(key);
        if (idx < 0)
            throw std::invalid_argument("ParameterSchedule::parse: unknown key '" + key + "'");
        if (kind_key) {
            if (val == "ramp") ramp[idx] = true;
            else if (val == "constant") ramp[idx] = false;
            else throw std::invalid_argument("ParameterSchedule::parse: unknown kind '" + val + "'");
        } else {
            std::size_t pos = 0;
            double v = std::stod(val, &pos);
            if (pos != val.size())
                throw std::invalid_argument("ParameterSchedule::parse: bad number '" + val + "'");
            value[idx] = v;
            if (idx == 3) has_q = true;
        }
    }

    ParameterSchedule s;
    s.alpha = ramp[0] ? ScalarSchedule::ramp(value[0]) : ScalarSchedule::constant(value[0]);
    s.beta = ramp[1] ? ScalarSchedule::ramp(value[1]) : ScalarSchedule::constant(value[1]);
    s.lambda = ramp[2] ? ScalarSchedule::ramp(value[2]) : ScalarSchedule::constant(value[2]);
    if (has_q) s.q = ramp[3] ? ScalarSchedule::ramp(value[3]) : ScalarSchedule::constant(value[3]);
    return s;
}

std::string ParameterSchedule::to_text() const {
    std::ostringstream os;
    os << "alpha=" << alpha.nominal_value() << ",alpha_kind=" << alpha.kind_name()
       << ",beta=" << beta.nominal_value() << ",beta_kind=" << beta.kind_name()
       << ",lambda=" << lambda.nominal_value() << ",lambda_kind=" << lambda.kind_name();
    if (q)
        os << ",q=" << q->nominal_value() << ",q_kind=" << q->kind_name();
    return os.str();
}

double nu(double lambda_k) {
    if (!(lambda_k > 0.0 && lambda_k < 1.0))
        throw std::domain_error("nu: lambda must lie in (0,1)");
    return 1.0 / lambda_k - 1.0;
}

double mu(double alpha_k, double beta_k, double lambda_k) {
    if (!(alpha_k >= 0.0 && alpha_k < 1.0))
        throw std::domain_error("mu: alpha must lie in [0,1)");
    if (!(beta_k >= 0.0 && beta_k <= 1.0))
        throw std::domain_error("mu: beta must lie in [0,1]");
    if (!(lambda_k > 0.0 && lambda_k < 1.0))
        throw std::domain_error("mu: lambda must lie in (0,1)");
    return (1.0 - lambda_k) * alpha_k + lambda_k * beta_k;
}

namespace {

double margin_bracket(double a, double b, double l, double q, double nu_prev, double a_prev) {
    double nu_k = nu(l);
    double qq = q * q;
    double cap_q = 1.0 - l + l * qq; // Q_k
    return (1.0 - l) * a * (1.0 + a) + l * qq * b * (1.0 + b) + nu_k * a * (1.0 - a) -
           cap_q * nu_prev * (1.0 - a_prev);
}

} // namespace

double weak_margin(const ParameterSchedule& s, int k) {
    if (k < 1) throw std::domain_error("weak_margin: k must be >= 1");
    int prev = k > 1 ? k - 1 : 1;
    return margin_bracket(s.alpha_at(k), s.beta_at(k), s.lambda_at(k), 1.0,
                          nu(s.lambda_at(prev)), s.alpha_at(prev));
}

double strong_margin(const ParameterSchedule& s, int k) {
    if (k < 1) throw std::domain_error("strong_margin: k must be >= 1");
    if (!s.q)
        throw std::invalid_argument("strong_margin: schedule has no contraction moduli q");
    double qk = s.q_at(k);
    if (!(qk > 0.0 && qk <= 1.0))
        throw std::domain_error("strong_margin: q must lie in (0,1]");
    int prev = k > 1 ? k - 1 : 1;
    return margin_bracket(s.alpha_at(k), s.beta_at(k), s.lambda_at(k), qk,
                          nu(s.lambda_at(prev)), s.alpha_at(prev));
}

double constant_case_margin(double alpha, double beta, double lambda) {
    return (beta - alpha) * (1.0 + alpha + beta) * lambda * lambda +
           (1.0 - alpha + 2.0 * alpha * alpha) * lambda - (1.0 - alpha) * (1.0 - alpha);
}

double lambda_heavy_ball(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("lambda_heavy_ball: alpha must lie in (0,1)");
    return (1.0 - alpha) * (1.0 - alpha) / (alpha * (1.0 + alpha));
}

double lambda_nesterov(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("lambda_nesterov: alpha must lie in [0,1)");
    return (1.0 - alpha) * (1.0 - alpha) / (1.0 - alpha + 2.0 * alpha * alpha);
}

double lambda_reflected(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("lambda_reflected: beta must lie in [0,1]");
    return 1.0 / (1.0 + beta);
}

LambdaBound lambda_bound_info(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("lambda_bound: alpha must lie in [0,1)");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("lambda_bound: beta must lie in [0,1]");

    double raw;
    if (std::abs(beta - alpha) < 1e-9) {
        raw = lambda_nesterov(alpha);
    } else {
        // Smaller positive root of the constant-case quadratic, in the
        // rationalised form 2c / (sqrt(D) + b) with D = b^2 + 4ac. Stable
        // for beta near alpha, where the textbook form degenerates to 0/0.
        double c = (1.0 - alpha) * (1.0 - alpha);
        double b = 1.0 - alpha + 2.0 * alpha * alpha;
        double disc = (1.0 - 3.0 * alpha) * (1.0 - 3.0 * alpha) +
                      4.0 * beta * (1.0 + beta) * c;
        raw = 2.0 * c / (std::sqrt(disc) + b);
    }
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

double lambda_bound(double alpha, double beta) { return lambda_bound_info(alpha, beta).value; }

FeasibilityVerdict check_feasibility(const ParameterSchedule& s, int horizon) {
    if (horizon < 1) throw std::domain_error("check_feasibility: horizon must be >= 1");

    FeasibilityVerdict v;
    v.horizon_limited = !s.has_known_limits();

    bool range_alpha = true, range_beta = true, range_lambda = true, range_q = true;
    bool mu_monotone = true;
    double sup_alpha = 0.0, sup_mu = 0.0, sup_lambda = 0.0, inf_lambda = 1.0;

    double prev_mu = 0.0;
    for (int k = 1; k <= horizon; ++k) {
        double a = s.alpha_at(k), b = s.beta_at(k), l = s.lambda_at(k);
        if (!(a >= 0.0 && a < 1.0)) range_alpha = false;
        if (!(b >= 0.0 && b <= 1.0)) range_beta = false;
        if (!(l > 0.0 && l < 1.0)) range_lambda = false;
        if (s.q) {
            double qk = s.q_at(k);
            if (!(qk > 0.0 && qk <= 1.0)) range_q = false;
        }
        sup_alpha = std::max(sup_alpha, a);
        sup_lambda = std::max(sup_lambda, l);
        inf_lambda = std::min(inf_lambda, l);
        if (range_alpha && range_beta && range_lambda) {
            double m = mu(a, b, l);
            sup_mu = std::max(sup_mu, m);
            if (k > 1 && m < prev_mu - 1e-12) mu_monotone = false;
            prev_mu = m;
        }
    }

    if (!v.horizon_limited) {
        double a_inf = s.alpha.limit(), b_inf = s.beta.limit(), l_inf = s.lambda.limit();
        if (!(a_inf >= 0.0 && a_inf < 1.0)) range_alpha = false;
        if (!(b_inf >= 0.0 && b_inf <= 1.0)) range_beta = false;
        if (!(l_inf > 0.0 && l_inf < 1.0)) range_lambda = false;
        if (s.q) {
            double q_inf = s.q->limit();
            if (!(q_inf > 0.0 && q_inf <= 1.0)) range_q = false;
        }
        sup_alpha = std::max(sup_alpha, a_inf);
        sup_lambda = std::max(sup_lambda, l_inf);
        inf_lambda = std::min(inf_lambda, l_inf);
        if (range_alpha && range_beta && range_lambda) {
            double m_inf = mu(a_inf, b_inf, l_inf);
            sup_mu = std::max(sup_mu, m_inf);
            if (m_inf < prev_mu - 1e-12) mu_monotone = false;
        }
    }

    if (!range_alpha) v.violated.push_back("alpha outside [0,1)");
    if (!range_beta) v.violated.push_back("beta outside [0,1]");
    if (!range_lambda) v.violated.push_back("lambda outside (0,1)");
    if (!range_q) v.violated.push_back("q outside (0,1]");
    if (range_alpha && sup_alpha >= 1.0) v.violated.push_back("sup alpha not < 1");
    if (range_lambda && sup_lambda >= 1.0) v.violated.push_back("sup lambda not < 1");
    if (range_lambda && inf_lambda <= 0.0) v.violated.push_back("inf lambda not > 0");
    if (range_alpha && range_beta && range_lambda && sup_mu >= 1.0)
        v.violated.push_back("sup mu not < 1");
    if (!mu_monotone) v.violated.push_back("mu not nondecreasing");
    v.hypothesis_ok = v.violated.empty();

    bool ranges_ok = range_alpha && range_beta && range_lambda;
    double weak_sup = -std::numeric_limits<double>::infinity();
    double strong_sup = -std::numeric_limits<double>::infinity();
    if (ranges_ok) {
        for (int k = 1; k <= horizon; ++k) {
            weak_sup = std::max(weak_sup, weak_margin(s, k));
            if (s.q && range_q) strong_sup = std::max(strong_sup, strong_margin(s, k));
        }
        if (!v.horizon_limited) {
            double a = s.alpha.limit(), b = s.beta.limit(), l = s.lambda.limit();
            double nu_inf = nu(l);
            weak_sup = std::max(weak_sup, constant_case_margin(a, b, l) / l);
            if (s.q && range_q) {
                double qq = s.q->limit() * s.q->limit();
                double cap_q = 1.0 - l + l * qq;
                double bracket = (1.0 - l) * a * (1.0 + a) + l * qq * b * (1.0 + b) +
                                 nu_inf * a * (1.0 - a) - cap_q * nu_inf * (1.0 - a);
                strong_sup = std::max(strong_sup, bracket);
            }
        }
    } else {
        weak_sup = std::numeric_limits<double>::infinity();
        if (s.q) strong_sup = std::numeric_limits<double>::infinity();
    }

    v.weak_margin_sup = weak_sup;
    v.feasible_weak = v.hypothesis_ok && weak_sup < 0.0;
    if (s.q) {
        v.strong_margin_sup = strong_sup;
        v.feasible_strong = v.hypothesis_ok && strong_sup < 0.0;
    }
    return v;
}

Vec PerturbationSchedule::eps_at(int k, Eigen::Index dim) const {
    return eps ? eps(k) : Vec::Zero(dim);
}
Vec PerturbationSchedule::rho_at(int k, Eigen::Index dim) const {
    return rho ? rho(k) : Vec::Zero(dim);
}
Vec PerturbationSchedule::theta_at(int k, Eigen::Index dim) const {
    return theta ? theta(k) : Vec::Zero(dim);
}

PerturbationFn PerturbationSchedule::power_decay(double scale, double power, Vec direction) {
    return [scale, power, dir = std::move(direction)](int k) -> Vec {
        return (scale / std::pow(static_cast<double>(k), power)) * dir;
    };
}

namespace {

StreamSummary summarize_stream(const PerturbationFn& fn, int horizon, Eigen::Index dim) {
    StreamSummary out;
    out.l1_partial.resize(horizon);
    out.l2sq_partial.resize(horizon);
    std::vector<double> norms(horizon, 0.0);
    double s1 = 0.0, s2 = 0.0;
    for (int k = 1; k <= horizon; ++k) {
        double n = 0.0;
        if (fn) n = fn(k).norm();
        (void)dim;
        norms[k - 1] = n;
        s1 += n;
        s2 += n * n;
        out.l1_partial[k - 1] = s1;
        out.l2sq_partial[k - 1] = s2;
    }
    out.l1_total = s1;
    out.l2sq_total = s2;

    int q = std::max(1, horizon / 4);
    double first1 = 0.0, last1 = 0.0, first2 = 0.0, last2 = 0.0;
    for (int i = 0; i < q; ++i) {
        first1 += norms[i];
        first2 += norms[i] * norms[i];
    }
    for (int i = horizon - q; i < horizon; ++i) {
        last1 += norms[i];
        last2 += norms[i] * norms[i];
    }
    out.l1_tail_ratio = first1 > 0.0 ? last1 / first1 : 0.0;
    out.l2_tail_ratio = first2 > 0.0 ? last2 / first2 : 0.0;
    out.l1_apparently_summable = out.l1_tail_ratio <= 1e-2;
    out.l2_apparently_summable = out.l2_tail_ratio <= 1e-2;
    return out;
}

} // namespace

PerturbationSummary classify_perturbations(const PerturbationSchedule& perts, int horizon,
                                           Eigen::Index dim) {
    if (horizon < 1) throw std::domain_error("classify_perturbations: horizon must be >= 1");
    PerturbationSummary out;
    out.eps = summarize_stream(perts.eps, horizon, dim);
    out.rho = summarize_stream(perts.rho, horizon, dim);
    out.theta = summarize_stream(perts.theta, horizon, dim);
    return out;
}

} // namespace kmit
