#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "melm/activation.hpp"
#include "melm/errors.hpp"
#include "melm/numerics.hpp"

namespace melm {

/// Hidden-layer parameters. Row j of input_weights is the weight vector of
/// hidden node j; during swarm training every entry lives in [-1, 1].
template <typename Scalar = double>
struct ElmParams {
    MatrixX<Scalar> input_weights;  // L x d
    VectorX<Scalar> biases;         // L
    Activation activation = Activation::Sigmoid;

    Eigen::Index hidden_count() const { return input_weights.rows(); }
    Eigen::Index input_dim() const { return input_weights.cols(); }
};

template <typename Scalar = double>
struct ElmModel {
    ElmParams<Scalar> params;
    MatrixX<Scalar> output_weights;  // L x m
};

/// The four regression criteria for one trained model on one data split.
template <typename Scalar = double>
struct EvalReport {
    Scalar rmse;
    Scalar r_squared;
    Scalar condition_number;  // K2 of the hidden matrix; may be +inf
    Scalar beta_norm;
};

/// H[i][j] = g(W_j . x_i + b_j) for every sample row of X.
template <typename Scalar>
MatrixX<Scalar> hidden_matrix(const MatrixX<Scalar>& features, const ElmParams<Scalar>& params) {
    if (features.cols() != params.input_dim())
        throw std::invalid_argument("hidden_matrix: features are " + detail::shape_of(features) +
                                    " but weights are " + detail::shape_of(params.input_weights) +
                                    " (input dims disagree)");
    if (params.biases.size() != params.hidden_count())
        throw std::invalid_argument("hidden_matrix: " +
                                    std::to_string(params.biases.size()) + " biases for " +
                                    std::to_string(params.hidden_count()) + " hidden nodes");
    MatrixX<Scalar> pre = features * params.input_weights.transpose();
    pre.rowwise() += params.biases.transpose();
    const Activation g = params.activation;
    return pre.unaryExpr([g](Scalar z) { return activate(g, z); });
}

/// Minimum-norm least-squares output weights, beta = pinv(H) * Y.
template <typename Scalar>
MatrixX<Scalar> solve_output_weights(const MatrixX<Scalar>& hidden, const MatrixX<Scalar>& targets,
                                     Scalar tol = Scalar(kSingularValueTol)) {
    if (hidden.rows() != targets.rows())
        throw std::invalid_argument("solve_output_weights: H is " + detail::shape_of(hidden) +
                                    " but Y is " + detail::shape_of(targets));
    return pseudoinverse(hidden, tol) * targets;
}

template <typename Scalar>
MatrixX<Scalar> predict(const ElmModel<Scalar>& model, const MatrixX<Scalar>& features) {
    if (model.output_weights.rows() != model.params.hidden_count())
        throw std::invalid_argument("predict: beta is " + detail::shape_of(model.output_weights) +
                                    " but the model has " +
                                    std::to_string(model.params.hidden_count()) + " hidden nodes");
    return hidden_matrix(features, model.params) * model.output_weights;
}

/// Root mean squared error over samples; squared error sums over output
/// components of one sample before dividing by the sample count.
template <typename Scalar>
Scalar rmse(const MatrixX<Scalar>& pred, const MatrixX<Scalar>& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
        throw std::invalid_argument("rmse: shapes differ, " + detail::shape_of(pred) + " vs " +
                                    detail::shape_of(truth));
    if (pred.rows() < 1) throw std::invalid_argument("rmse: need at least one sample");
    return std::sqrt((pred - truth).squaredNorm() / Scalar(pred.rows()));
}

/// Coefficient of determination; 1 is a perfect fit, negative is worse than
/// predicting the mean.
template <typename Scalar>
Scalar r_squared(const MatrixX<Scalar>& pred, const MatrixX<Scalar>& truth) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
        throw std::invalid_argument("r_squared: shapes differ, " + detail::shape_of(pred) +
                                    " vs " + detail::shape_of(truth));
    if (truth.rows() < 2) throw std::invalid_argument("r_squared: need at least two samples");
    for (Eigen::Index c = 0; c < truth.cols(); ++c)
        if (truth.col(c).minCoeff() == truth.col(c).maxCoeff())
            throw DataError("r_squared: target column " + std::to_string(c) +
                            " is constant, fit degree is undefined");
    const Scalar ss_res = (pred - truth).squaredNorm();
    const MatrixX<Scalar> centered = truth.rowwise() - truth.colwise().mean();
    const Scalar ss_tot = centered.squaredNorm();
    return Scalar(1) - ss_res / ss_tot;
}

/// Bundle RMSE and R2 on (X, Y) predictions with K2 of the hidden matrix on X
/// and the output-weight norm.
template <typename Scalar>
EvalReport<Scalar> evaluate(const ElmModel<Scalar>& model, const MatrixX<Scalar>& features,
                            const MatrixX<Scalar>& targets) {
    const MatrixX<Scalar> hidden = hidden_matrix(features, model.params);
    const MatrixX<Scalar> pred = hidden * model.output_weights;
    return {rmse(pred, targets), r_squared(pred, targets), condition_number(hidden),
            l2_norm(model.output_weights)};
}

namespace detail {

inline void write_matrix(std::ostream& os, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m(i, j);
        }
        os << '\n';
    }
}

inline Matrix read_matrix(std::istream& is, Eigen::Index rows, Eigen::Index cols,
                          const char* what) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(is >> m(i, j)))
                throw DataError(std::string("model file: truncated or non-numeric ") + what);
    return m;
}

}  // namespace detail

/// Plain-text model format: L, d, m and the activation tag, then W, b and beta
/// as whitespace-separated rows at 17 significant digits (round-trip exact).
inline void save_model(std::ostream& os, const ElmModel<double>& model) {
    os << std::setprecision(17);
    os << "L " << model.params.hidden_count() << '\n';
    os << "d " << model.params.input_dim() << '\n';
    os << "m " << model.output_weights.cols() << '\n';
    os << "activation " << to_string(model.params.activation) << '\n';
    os << "W\n";
    detail::write_matrix(os, model.params.input_weights);
    os << "b\n";
    detail::write_matrix(os, model.params.biases.transpose());
    os << "beta\n";
    detail::write_matrix(os, model.output_weights);
}

inline ElmModel<double> load_model(std::istream& is) {
    auto expect_key = [&](const char* key) {
        std::string tok;
        if (!(is >> tok) || tok != key)
            throw DataError("model file: expected '" + std::string(key) + "', got '" + tok + "'");
    };
    Eigen::Index hidden = 0, in_dim = 0, out_dim = 0;
    expect_key("L");
    is >> hidden;
    expect_key("d");
    is >> in_dim;
    expect_key("m");
    is >> out_dim;
    if (!is || hidden < 1 || in_dim < 1 || out_dim < 1)
        throw DataError("model file: bad header dimensions");
    expect_key("activation");
    std::string act;
    is >> act;
    ElmModel<double> model;
    try {
        model.params.activation = parse_activation(act);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
    expect_key("W");
    model.params.input_weights = detail::read_matrix(is, hidden, in_dim, "input weights");
    expect_key("b");
    model.params.biases = detail::read_matrix(is, 1, hidden, "biases").transpose();
    expect_key("beta");
    model.output_weights = detail::read_matrix(is, hidden, out_dim, "output weights");
    return model;
}

inline void save_model(const std::string& path, const ElmModel<double>& model) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open '" + path + "' for writing");
    save_model(os, model);
}

inline ElmModel<double> load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open model file '" + path + "'");
    return load_model(is);
}

}  // namespace melm
