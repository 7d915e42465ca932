#include "pqclone/problem.hpp"

#include <cmath>
#include <complex>
#include <fstream>

#include <json.hpp>

namespace pqclone {

namespace {

std::complex<double> int_pow(std::complex<double> base, int exp) {
    std::complex<double> acc(1.0, 0.0);
    while (exp > 0) {
        if (exp & 1) acc *= base;
        base *= base;
        exp >>= 1;
    }
    return acc;
}

} // namespace

StateSet StateSet::create(int dim, std::vector<Eigen::VectorXcd> states) {
    const int n = static_cast<int>(states.size());
    if (n < 2) fail("InvariantViolation", "fewer than two states");
    if (dim < n) fail("InvariantViolation", "dim smaller than state count");
    for (int i = 0; i < n; ++i) {
        if (states[i].size() != dim) {
            fail("InvariantViolation", "state " + std::to_string(i) + " has wrong dimension");
        }
        if (std::abs(states[i].norm() - 1.0) > 1e-12) {
            fail("InvariantViolation", "state " + std::to_string(i) + " not unit norm");
        }
    }
    StateSet set;
    set.dim = dim;
    set.states = std::move(states);
    const HermitianMatrix gram(compute_overlaps(set));
    if (min_eigenvalue(gram) <= 1e-10) {
        fail("InvariantViolation", "states not linearly independent");
    }
    return set;
}

StateSet StateSet::from_gram(const Eigen::MatrixXcd& gram) {
    const HermitianMatrix g(gram);
    const int n = g.order();
    for (int i = 0; i < n; ++i) {
        if (std::abs(g(i, i).real() - 1.0) > 1e-12) {
            fail("InvariantViolation", "gram diagonal not one");
        }
    }
    // G = F F^dagger, so the columns of F^dagger realize the inner products.
    const Eigen::MatrixXcd factor = psd_factor(g, 1e-10);
    const Eigen::MatrixXcd kets = factor.adjoint(); // r x n, columns are states
    std::vector<Eigen::VectorXcd> states(n);
    const int r = static_cast<int>(kets.rows());
    const int dim = std::max(r, n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        v.head(r) = kets.col(i);
        v.normalize(); // remove rounding drift in the norm
        states[i] = v;
    }
    return create(dim, std::move(states));
}

AlphaGram AlphaGram::create(const Eigen::MatrixXcd& entries) {
    if (entries.rows() != entries.cols()) {
        fail("InvariantViolation", "alpha not square");
    }
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        fail("InvariantViolation", "alpha not Hermitian");
    }
    const int n = static_cast<int>(entries.rows());
    AlphaGram alpha;
    alpha.entries = 0.5 * (entries + entries.adjoint());
    for (int i = 0; i < n; ++i) {
        if (std::abs(alpha.entries(i, i) - std::complex<double>(1.0, 0.0)) > 1e-12) {
            fail("InvariantViolation", "alpha diagonal not one");
        }
        alpha.entries(i, i) = 1.0;
        for (int j = 0; j < n; ++j) {
            if (std::abs(alpha.entries(i, j)) > 1.0 + 1e-12) {
                fail("InvariantViolation", "alpha entry exceeds unit magnitude");
            }
        }
    }
    if (min_eigenvalue(HermitianMatrix(alpha.entries)) < -1e-10) {
        fail("InvariantViolation", "alpha not positive semidefinite");
    }
    return alpha;
}

AlphaGram AlphaGram::identity(int n) {
    AlphaGram alpha;
    alpha.entries = Eigen::MatrixXcd::Identity(n, n);
    return alpha;
}

bool AlphaGram::is_identity() const {
    const int n = static_cast<int>(entries.rows());
    return (entries - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0;
}

CloningProblem CloningProblem::create(StateSet states, int m, int n, AlphaGram alpha,
                                      Eigen::VectorXd priors) {
    const int count = states.count();
    if (m < 1 || n <= m) {
        fail("InvariantViolation", "copy counts require n > m >= 1");
    }
    if (alpha.entries.rows() != count) {
        fail("InvariantViolation", "alpha size does not match state count");
    }
    if (priors.size() != count) {
        fail("InvariantViolation", "priors size does not match state count");
    }
    for (int i = 0; i < count; ++i) {
        if (!(priors(i) > 0.0)) {
            fail("InvariantViolation", "priors not strictly positive");
        }
    }
    if (std::abs(priors.sum() - 1.0) > 1e-12) {
        fail("InvariantViolation", "priors do not sum to one");
    }

    CloningProblem problem;
    problem.states_ = std::move(states);
    problem.m_ = m;
    problem.n_ = n;
    problem.alpha_ = std::move(alpha);
    problem.priors_ = std::move(priors);
    problem.grams_ = build_grams(compute_overlaps(problem.states_), m, n, problem.alpha_);
    problem.x_m_norm_ = spectral_norm(HermitianMatrix(problem.grams_.x_m));
    problem.surface_scale_ = std::max(1.0, std::pow(problem.x_m_norm_, count));
    return problem;
}

Eigen::MatrixXcd compute_overlaps(const StateSet& states) {
    const int n = states.count();
    Eigen::MatrixXcd s(n, n);
    for (int i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const std::complex<double> v = states.states[i].dot(states.states[j]);
            s(i, j) = v;
            s(j, i) = std::conj(v);
        }
    }
    return s;
}

GramPair build_grams(const Eigen::MatrixXcd& overlaps, int m, int n,
                     const AlphaGram& alpha) {
    const int count = static_cast<int>(overlaps.rows());
    GramPair pair;
    pair.x_m = Eigen::MatrixXcd(count, count);
    pair.x_n_p = Eigen::MatrixXcd(count, count);
    for (int i = 0; i < count; ++i) {
        pair.x_m(i, i) = 1.0;
        pair.x_n_p(i, i) = 1.0;
        for (int j = i + 1; j < count; ++j) {
            const std::complex<double> sm = int_pow(overlaps(i, j), m);
            const std::complex<double> snp = int_pow(overlaps(i, j), n) * alpha.entries(i, j);
            pair.x_m(i, j) = sm;
            pair.x_m(j, i) = std::conj(sm);
            pair.x_n_p(i, j) = snp;
            pair.x_n_p(j, i) = std::conj(snp);
        }
    }
    return pair;
}

GramPair build_grams(const CloningProblem& problem) {
    return problem.grams();
}

namespace {

using nlohmann::json;

std::complex<double> parse_complex(const json& v, const char* what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail("ParseError", std::string(what) + " entries must be [re, im] pairs");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

Eigen::MatrixXcd parse_matrix(const json& rows, int n, const char* what) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        fail("ParseError", std::string(what) + " must be an NxN array");
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            fail("ParseError", std::string(what) + " must be an NxN array");
        }
        for (int j = 0; j < n; ++j) {
            m(i, j) = parse_complex(row[j], what);
        }
    }
    return m;
}

json complex_to_json(const std::complex<double>& v) {
    return json::array({v.real(), v.imag()});
}

} // namespace

CloningProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("ParseError", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail("ParseError", e.what());
    }

    for (const char* key : {"dim", "states", "m", "n"}) {
        if (!doc.contains(key)) {
            fail("ParseError", std::string("missing required key \"") + key + "\"");
        }
    }
    if (!doc["dim"].is_number_integer() || !doc["m"].is_number_integer() ||
        !doc["n"].is_number_integer()) {
        fail("ParseError", "dim, m and n must be integers");
    }
    const int dim = doc["dim"].get<int>();
    const int m = doc["m"].get<int>();
    const int n = doc["n"].get<int>();

    if (!doc["states"].is_array() || doc["states"].empty()) {
        fail("ParseError", "states must be a non-empty array");
    }
    const int count = static_cast<int>(doc["states"].size());
    std::vector<Eigen::VectorXcd> states(count);
    for (int i = 0; i < count; ++i) {
        const json& row = doc["states"][i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            fail("ParseError", "state " + std::to_string(i) + " must have dim entries");
        }
        Eigen::VectorXcd v(dim);
        for (int k = 0; k < dim; ++k) {
            v(k) = parse_complex(row[k], "state");
        }
        states[i] = v;
    }

    AlphaGram alpha = doc.contains("alpha")
                          ? AlphaGram::create(parse_matrix(doc["alpha"], count, "alpha"))
                          : AlphaGram::identity(count);

    Eigen::VectorXd priors;
    if (doc.contains("priors")) {
        const json& pr = doc["priors"];
        if (!pr.is_array() || static_cast<int>(pr.size()) != count) {
            fail("ParseError", "priors must have one entry per state");
        }
        priors = Eigen::VectorXd(count);
        for (int i = 0; i < count; ++i) {
            if (!pr[i].is_number()) fail("ParseError", "priors must be numbers");
            priors(i) = pr[i].get<double>();
        }
    } else {
        priors = Eigen::VectorXd::Constant(count, 1.0 / count);
    }

    return CloningProblem::create(StateSet::create(dim, std::move(states)), m, n,
                                  std::move(alpha), std::move(priors));
}

void save_problem(const CloningProblem& problem, const std::string& path) {
    json doc;
    doc["dim"] = problem.states().dim;
    json states = json::array();
    for (const auto& v : problem.states().states) {
        json row = json::array();
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            row.push_back(complex_to_json(v(k)));
        }
        states.push_back(std::move(row));
    }
    doc["states"] = std::move(states);
    doc["m"] = problem.m();
    doc["n"] = problem.n();
    if (!problem.alpha().is_identity()) {
        const int n = problem.count();
        json alpha = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int j = 0; j < n; ++j) {
                row.push_back(complex_to_json(problem.alpha().entries(i, j)));
            }
            alpha.push_back(std::move(row));
        }
        doc["alpha"] = std::move(alpha);
    }
    json priors = json::array();
    for (Eigen::Index i = 0; i < problem.priors().size(); ++i) {
        priors.push_back(problem.priors()(i));
    }
    doc["priors"] = std::move(priors);

    std::ofstream out(path);
    if (!out) fail("ParseError", "cannot write " + path);
    out << doc.dump(2) << "\n";
}

} // namespace pqclone
