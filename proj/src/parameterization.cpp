#include "tenreco/parameterization.hpp"

#include <numeric>

namespace tenreco {

Frac Frac::parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("rational entries must look like \"p/q\": " + s);
    Frac f;
    f.num = std::stoll(s.substr(0, slash));
    f.den = std::stoll(s.substr(slash + 1));
    if (f.den <= 0)
        throw std::invalid_argument("rational denominators must be positive: " + s);
    return f;
}

void ParamVector::validate(bool strict) const {
    if (M < 1 || I < 1 || R < 1)
        throw std::invalid_argument("parameter vector needs M, I, R >= 1");
    if (theta.size() != size())
        throw std::invalid_argument("theta length must be R * (1 + M(I-1))");
    if (mode == ParamMode::rational && exact.size() != static_cast<std::size_t>(size()))
        throw std::invalid_argument("rational parameters must carry exact entries");
    for (int r = 0; r < R; ++r) {
        const double l = lambda(r);
        if (l < 0.0 || (strict && l <= 0.0))
            throw std::invalid_argument("lambda must be nonnegative");
        for (int m = 1; m <= M; ++m) {
            const Eigen::VectorXd u = ua(r, m);
            double sum = 0.0;
            for (Eigen::Index i = 0; i < u.size(); ++i) {
                if (u[i] < 0.0 || (strict && u[i] <= 0.0))
                    throw std::invalid_argument("truncated factor entries must be nonnegative");
                sum += u[i];
            }
            if (sum > 1.0 || (strict && sum >= 1.0))
                throw std::invalid_argument("truncated factor columns must sum to at most 1");
        }
    }
}

Eigen::VectorXd lift(const Eigen::VectorXd& ua) {
    Eigen::VectorXd out(ua.size() + 1);
    out.head(ua.size()) = ua;
    out[ua.size()] = 1.0 - ua.sum();
    return out;
}

Eigen::MatrixXd simplex_lift_jacobian(int I) {
    if (I < 1)
        throw std::invalid_argument("simplex lift needs I >= 1");
    Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(I, I - 1);
    jp.topRows(I - 1) = Eigen::MatrixXd::Identity(I - 1, I - 1);
    jp.row(I - 1).setConstant(-1.0);
    return jp;
}

namespace {

void check_dims(const ParamVector& theta, const Coupling& coupling) {
    if (theta.M != coupling.M)
        throw std::invalid_argument("parameter vector and coupling disagree on M");
    if (theta.theta.size() != theta.size())
        throw std::invalid_argument("theta length must be R * (1 + M(I-1))");
}

// Lifted factor columns, indexed [r][m-1].
std::vector<std::vector<Eigen::VectorXd>> lift_table(const ParamVector& theta) {
    std::vector<std::vector<Eigen::VectorXd>> lifted(theta.R);
    for (int r = 0; r < theta.R; ++r) {
        lifted[r].reserve(theta.M);
        for (int m = 1; m <= theta.M; ++m)
            lifted[r].push_back(lift(theta.ua(r, m)));
    }
    return lifted;
}

} // namespace

MarginalStack mu(const ParamVector& theta, const Coupling& coupling) {
    check_dims(theta, coupling);
    const int I = theta.I;
    const Eigen::Index n3 = static_cast<Eigen::Index>(I) * I * I;
    const auto lifted = lift_table(theta);

    MarginalStack out;
    out.I = I;
    out.T = coupling.triplet_count();
    out.y = Eigen::VectorXd::Zero(n3 * out.T);
    for (int t = 0; t < out.T; ++t) {
        const auto& tri = coupling.triplets[t];
        for (int r = 0; r < theta.R; ++r) {
            const auto& a = lifted[r][tri[0] - 1];
            const auto& b = lifted[r][tri[1] - 1];
            const auto& c = lifted[r][tri[2] - 1];
            const double l = theta.lambda(r);
            Eigen::Index pos = n3 * t;
            for (int k = 0; k < I; ++k)
                for (int j = 0; j < I; ++j)
                    for (int i = 0; i < I; ++i)
                        out.y[pos++] += l * (c[k] * (b[j] * a[i]));
        }
    }
    return out;
}

JacobianMatrix jacobian(const ParamVector& theta, const Coupling& coupling) {
    check_dims(theta, coupling);
    const int I = theta.I;
    const int n3 = I * I * I;
    const int n1 = theta.block_len();
    const auto lifted = lift_table(theta);
    const Eigen::MatrixXd jp = simplex_lift_jacobian(I);

    JacobianMatrix out;
    out.M = theta.M;
    out.I = I;
    out.R = theta.R;
    out.T = coupling.triplet_count();
    out.m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n3) * out.T,
                                  static_cast<Eigen::Index>(n1) * theta.R);

    for (int t = 0; t < out.T; ++t) {
        const auto& tri = coupling.triplets[t];
        const Eigen::Index row0 = static_cast<Eigen::Index>(n3) * t;
        for (int r = 0; r < theta.R; ++r) {
            const Eigen::Index col0 = static_cast<Eigen::Index>(n1) * r;
            const Eigen::MatrixXd a = lifted[r][tri[0] - 1];
            const Eigen::MatrixXd b = lifted[r][tri[1] - 1];
            const Eigen::MatrixXd c = lifted[r][tri[2] - 1];
            const double l = theta.lambda(r);

            out.m.block(row0, col0, n3, 1) = kron(kron(c, b), a);
            const auto col_of = [&](int m) {
                return col0 + 1 + static_cast<Eigen::Index>(m - 1) * (I - 1);
            };
            out.m.block(row0, col_of(tri[0]), n3, I - 1) = l * kron(kron(c, b), jp);
            out.m.block(row0, col_of(tri[1]), n3, I - 1) = l * kron(kron(c, jp), a);
            out.m.block(row0, col_of(tri[2]), n3, I - 1) = l * kron(kron(jp, b), a);
        }
    }
    return out;
}

namespace {

Frac rational_lambda(Rng& rng) {
    // p/q in [1/2, 3/2]; q <= 42 keeps the numerator below 64 too.
    const long long q = 2 + static_cast<long long>(rng.below(41));
    const long long lo = (q + 1) / 2;
    const long long hi = (3 * q) / 2;
    const long long p = lo + static_cast<long long>(rng.below(hi - lo + 1));
    return Frac{p, q};
}

// A strictly positive exact point of the I-simplex: n_i / q with n_i >= 1,
// sum n_i = q <= 64. Sampled by stars and bars.
std::vector<Frac> rational_simplex_point(int I, Rng& rng) {
    const long long q = I + static_cast<long long>(rng.below(static_cast<std::uint64_t>(64 - I + 1)));
    std::vector<long long> cuts;
    std::vector<char> used(q, 0);
    while (static_cast<int>(cuts.size()) < I - 1) {
        const long long c = 1 + static_cast<long long>(rng.below(q - 1));
        if (!used[c]) {
            used[c] = 1;
            cuts.push_back(c);
        }
    }
    cuts.push_back(0);
    cuts.push_back(q);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Frac> out;
    out.reserve(I);
    for (int i = 0; i < I; ++i)
        out.push_back(Frac{cuts[i + 1] - cuts[i], q});
    return out;
}

} // namespace

ParamVector sample_params(int M, int I, int R, std::uint64_t seed, ParamMode mode) {
    if (M < 1 || I < 1 || R < 1)
        throw std::invalid_argument("sample_params needs M, I, R >= 1");
    ParamVector p;
    p.M = M;
    p.I = I;
    p.R = R;
    p.mode = mode;
    p.theta.resize(p.size());
    if (mode == ParamMode::rational)
        p.exact.resize(p.size());

    const int n1 = p.block_len();
    for (int r = 0; r < R; ++r) {
        Rng rng(stable_hash(seed, 0x7468657461ULL, static_cast<std::uint64_t>(r)));
        Eigen::Index pos = static_cast<Eigen::Index>(r) * n1;
        if (mode == ParamMode::generic) {
            p.theta[pos++] = rng.uniform(0.5, 1.5);
            for (int m = 0; m < M; ++m) {
                // Flat Dirichlet on the I-simplex via normalized exponentials.
                Eigen::VectorXd g(I);
                for (int i = 0; i < I; ++i)
                    g[i] = rng.exponential();
                g /= g.sum();
                for (int i = 0; i < I - 1; ++i)
                    p.theta[pos++] = g[i];
            }
        } else {
            const Frac l = rational_lambda(rng);
            p.exact[pos] = l;
            p.theta[pos] = l.value();
            ++pos;
            for (int m = 0; m < M; ++m) {
                const auto pt = rational_simplex_point(I, rng);
                for (int i = 0; i < I - 1; ++i) {
                    p.exact[pos] = pt[i];
                    p.theta[pos] = pt[i].value();
                    ++pos;
                }
            }
        }
    }
    return p;
}

FactorModel to_factor_model(const ParamVector& theta) {
    FactorModel model;
    model.lambda.resize(theta.R);
    for (int r = 0; r < theta.R; ++r)
        model.lambda[r] = theta.lambda(r);
    model.factors.assign(theta.M, Eigen::MatrixXd(theta.I, theta.R));
    for (int m = 1; m <= theta.M; ++m)
        for (int r = 0; r < theta.R; ++r)
            model.factors[m - 1].col(r) = lift(theta.ua(r, m));
    return model;
}

nlohmann::json to_json(const ParamVector& p) {
    nlohmann::json j;
    j["M"] = p.M;
    j["I"] = p.I;
    j["R"] = p.R;
    j["mode"] = p.mode == ParamMode::rational ? "rational" : "generic";
    auto arr = nlohmann::json::array();
    if (p.mode == ParamMode::rational) {
        for (const auto& f : p.exact)
            arr.push_back(f.str());
    } else {
        for (Eigen::Index i = 0; i < p.theta.size(); ++i)
            arr.push_back(p.theta[i]);
    }
    j["theta"] = std::move(arr);
    return j;
}

ParamVector params_from_json(const nlohmann::json& j) {
    ParamVector p;
    p.M = j.at("M").get<int>();
    p.I = j.at("I").get<int>();
    p.R = j.at("R").get<int>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "rational")
        p.mode = ParamMode::rational;
    else if (mode == "generic")
        p.mode = ParamMode::generic;
    else
        throw std::invalid_argument("unknown parameter mode: " + mode);

    const auto& arr = j.at("theta");
    p.theta.resize(arr.size());
    if (p.mode == ParamMode::rational)
        p.exact.resize(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (p.mode == ParamMode::rational) {
            p.exact[i] = Frac::parse(arr[i].get<std::string>());
            p.theta[i] = p.exact[i].value();
        } else {
            p.theta[i] = arr[i].get<double>();
        }
    }
    p.validate();
    return p;
}

} // namespace tenreco
