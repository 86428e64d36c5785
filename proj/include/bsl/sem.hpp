#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bsl/graph.hpp"
#include "bsl/random.hpp"

namespace bsl::sem {

enum class SemModel { linear, nonlinear };

struct SemSpec {
    SemModel model = SemModel::linear;
    double sigma = 1.0;
    /// Coupling per edge, aligned with Dag::edges() order. Empty means 1.0 everywhere.
    std::vector<double> weights;

    void validate(const graph::Dag& g) const;
    double weight(std::size_t edge_index) const {
        return weights.empty() ? 1.0 : weights[edge_index];
    }
};

/// Column-major samples; column j holds node j.
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(std::size_t n_samples, std::size_t n_vars)
        : n_samples_(n_samples), n_vars_(n_vars), values_(n_samples * n_vars, 0.0) {}

    std::size_t n_samples() const { return n_samples_; }
    std::size_t n_vars() const { return n_vars_; }

    std::span<const double> column(std::size_t j) const {
        return {values_.data() + j * n_samples_, n_samples_};
    }
    std::span<double> column(std::size_t j) { return {values_.data() + j * n_samples_, n_samples_}; }

    double operator()(std::size_t i, std::size_t j) const { return values_[j * n_samples_ + i]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[j * n_samples_ + i]; }

    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

private:
    std::size_t n_samples_ = 0;
    std::size_t n_vars_ = 0;
    std::vector<double> values_;
};

/// Logistic function 1 / (1 + e^-z), evaluated without overflow.
double sigmoid(double z);

/// Standard-normal innovations, drawn column by column in node index order.
DataMatrix draw_innovations(std::size_t n_vars, std::size_t n_samples, RandomStream& rng);

/// Evaluates the structural equations in topological order. Column i of
/// `innovations` is xi_i for a root and eta_i for a child:
///   root:      x_i = xi_i
///   linear:    x_i = sum_{j in pa(i)} w_ji x_j + sigma eta_i
///   nonlinear: x_i = sigmoid(sum_{j in pa(i)} w_ji x_j) + sigma eta_i
DataMatrix apply_structural_equations(const graph::Dag& g, const SemSpec& spec,
                                      const DataMatrix& innovations);

/// draw_innovations followed by apply_structural_equations.
DataMatrix simulate_dataset(const graph::Dag& g, const SemSpec& spec, std::size_t n_samples,
                            RandomStream& rng);

/// Header `x0,x1,...`, one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const DataMatrix& data);
DataMatrix read_csv(std::istream& in);

}  // namespace bsl::sem
