#include "otbary/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otbary/errors.hpp"

namespace otbary {

double squared_distance(const Eigen::MatrixXd& rows_a, Eigen::Index a,
                        const Eigen::MatrixXd& rows_b, Eigen::Index b) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rows_a.cols(); ++k) {
    const double diff = rows_a(a, k) - rows_b(b, k);
    sum += diff * diff;
  }
  return sum;
}

namespace {

// Transportation simplex over the complete bipartite graph. The basis
// is a spanning tree on m sources + n targets with exactly m+n-1 arcs
// and zero-flow arcs stay basic. The entering arc comes from a
// round-robin block search, falling back to Bland's smallest-index rule
// under sustained degeneracy; the leaving arc always breaks ties by
// smallest cell index.
class TransportationSimplex {
public:
  TransportationSimplex(const DiscreteMeasure& source, const DiscreteMeasure& target)
      : m_(static_cast<int>(source.size())),
        n_(static_cast<int>(target.size())),
        cost_(static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_)),
        u_(m_),
        v_(n_) {
    double cmax = 0.0;
    for (int i = 0; i < m_; ++i) {
      double* row = cost_.data() + static_cast<std::size_t>(i) * n_;
      for (int j = 0; j < n_; ++j) {
        row[j] = squared_distance(source.support(), i, target.support(), j);
        cmax = std::max(cmax, row[j]);
      }
    }
    // Entering tolerance: tight enough for the 1e-7 certificate, loose
    // enough to ignore dual round-off accumulated along tree paths.
    eps_ = 1e-11 * std::max(1.0, cmax);
    northwest_corner(source.weights(), target.weights());
  }

  void run() {
    const long cap = 50L * (m_ + n_) * std::max(m_, n_);
    // Block search makes fast progress but has no anti-cycling
    // guarantee; after this many consecutive zero-flow pivots we hand
    // the entering choice to Bland's rule, whose smallest-index
    // discipline provably escapes any degenerate stall.
    const int stall_limit = 4 * (m_ + n_);
    int degenerate_streak = 0;
    long pivots = 0;
    for (;;) {
      compute_duals();
      const long entering = degenerate_streak >= stall_limit ? find_entering_bland()
                                                             : find_entering_block();
      if (entering < 0) return;
      const double theta =
          pivot(static_cast<int>(entering / n_), static_cast<int>(entering % n_));
      degenerate_streak = theta > 0.0 ? 0 : degenerate_streak + 1;
      if (++pivots > cap) {
        throw NumericalError("solve_ot: pivot cap exceeded (" + std::to_string(cap) +
                             ") on a " + std::to_string(m_) + "x" + std::to_string(n_) +
                             " instance");
      }
    }
  }

  TransportPlan extract(const DiscreteMeasure& source, const DiscreteMeasure& target) const {
    TransportPlan result;
    result.plan = Eigen::MatrixXd::Zero(m_, n_);
    double cost = 0.0;
    for (const Arc& arc : arcs_) {
      const double flow = arc.flow < 0.0 ? 0.0 : arc.flow;
      result.plan(arc.i, arc.j) = flow;
      cost += flow * cost_[static_cast<std::size_t>(arc.i) * n_ + arc.j];
    }
    result.cost = cost;
    result.source_weights = source.weights();
    result.target_weights = target.weights();
    result.source_potentials = Eigen::Map<const Eigen::VectorXd>(u_.data(), m_);
    result.target_potentials = Eigen::Map<const Eigen::VectorXd>(v_.data(), n_);
    return result;
  }

private:
  struct Arc {
    int i;
    int j;
    double flow;
  };

  int node_of_source(int i) const { return i; }
  int node_of_target(int j) const { return m_ + j; }

  void attach(int arc_index) {
    adjacency_[node_of_source(arcs_[arc_index].i)].push_back(arc_index);
    adjacency_[node_of_target(arcs_[arc_index].j)].push_back(arc_index);
  }

  void detach(int arc_index) {
    auto erase_from = [&](int node) {
      auto& list = adjacency_[node];
      list.erase(std::find(list.begin(), list.end(), arc_index));
    };
    erase_from(node_of_source(arcs_[arc_index].i));
    erase_from(node_of_target(arcs_[arc_index].j));
  }

  // Staircase walk; allocates min(remaining supply, remaining demand)
  // and always emits exactly m+n-1 arcs, zero-flow ones included.
  void northwest_corner(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
    std::vector<double> a(supply.data(), supply.data() + m_);
    std::vector<double> b(demand.data(), demand.data() + n_);
    arcs_.reserve(m_ + n_ - 1);
    adjacency_.assign(m_ + n_, {});
    int i = 0;
    int j = 0;
    for (;;) {
      const double flow = std::min(a[i], b[j]);
      arcs_.push_back({i, j, flow});
      attach(static_cast<int>(arcs_.size()) - 1);
      if (i == m_ - 1 && j == n_ - 1) break;
      bool advance_row = a[i] <= b[j];
      if (i == m_ - 1) advance_row = false;
      if (j == n_ - 1) advance_row = true;
      if (advance_row) {
        b[j] -= flow;
        ++i;
      } else {
        a[i] -= flow;
        ++j;
      }
    }
  }

  // Tree traversal from source 0 with u[0] = 0; basic arcs satisfy
  // u_i + v_j = c_ij exactly by construction.
  void compute_duals() {
    stack_.clear();
    visited_.assign(m_ + n_, false);
    u_[0] = 0.0;
    visited_[0] = true;
    stack_.push_back(0);
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      for (const int arc_index : adjacency_[node]) {
        const Arc& arc = arcs_[arc_index];
        const double c = cost_[static_cast<std::size_t>(arc.i) * n_ + arc.j];
        const int other = node < m_ ? node_of_target(arc.j) : node_of_source(arc.i);
        if (visited_[other]) continue;
        if (other >= m_) {
          v_[arc.j] = c - u_[arc.i];
        } else {
          u_[arc.i] = c - v_[arc.j];
        }
        visited_[other] = true;
        stack_.push_back(other);
      }
    }
  }

  // Bland's rule: smallest cell index i*n+j with negative reduced cost.
  // Blocks are first screened by their minimum of (c_ij - v_j), which
  // vectorizes; only a qualifying block is rescanned for the first hit.
  long find_entering_bland() const {
    constexpr int kBlock = 64;
    for (int i = 0; i < m_; ++i) {
      const double* row = cost_.data() + static_cast<std::size_t>(i) * n_;
      const double threshold = u_[i] - eps_;
      for (int start = 0; start < n_; start += kBlock) {
        const int end = std::min(start + kBlock, n_);
        double lowest = std::numeric_limits<double>::infinity();
        for (int j = start; j < end; ++j) {
          lowest = std::min(lowest, row[j] - v_[j]);
        }
        if (lowest < threshold) {
          for (int j = start; j < end; ++j) {
            if (row[j] - v_[j] < threshold) return static_cast<long>(i) * n_ + j;
          }
        }
      }
    }
    return -1;
  }

  // Round-robin block search: take the most negative reduced cost in
  // the first ~sqrt(mn)-sized window (resuming at the cursor) that
  // holds one; a full fruitless wrap certifies optimality. Cells are
  // visited in row segments so the hot min-scan vectorizes.
  long find_entering_block() {
    const long total = static_cast<long>(m_) * n_;
    const long block =
        std::max<long>(64, static_cast<long>(std::sqrt(static_cast<double>(total))));
    long pos = cursor_ >= total ? 0 : cursor_;
    long scanned = 0;
    long best_cell = -1;
    double best_rc = -eps_;
    while (scanned < total) {
      const int i = static_cast<int>(pos / n_);
      const int j0 = static_cast<int>(pos % n_);
      const int seg = static_cast<int>(std::min<long>(n_ - j0, total - scanned));
      const double* row = cost_.data() + static_cast<std::size_t>(i) * n_;
      double lowest = std::numeric_limits<double>::infinity();
      for (int t = 0; t < seg; ++t) {
        lowest = std::min(lowest, row[j0 + t] - v_[j0 + t]);
      }
      if (lowest - u_[i] < best_rc) {
        for (int t = 0; t < seg; ++t) {
          const double rc = row[j0 + t] - v_[j0 + t] - u_[i];
          if (rc < best_rc) {
            best_rc = rc;
            best_cell = pos + t;
          }
        }
      }
      pos += seg;
      if (pos >= total) pos = 0;
      scanned += seg;
      if (scanned >= block && best_cell >= 0) break;
    }
    if (best_cell < 0) return -1;
    cursor_ = pos;
    return best_cell;
  }

  // Unique tree path between the entering arc's endpoints; arcs along
  // the cycle alternate +theta / -theta starting from the entering arc.
  // Returns theta (zero on a degenerate pivot).
  double pivot(int enter_i, int enter_j) {
    const int start = node_of_target(enter_j);
    const int goal = node_of_source(enter_i);
    parent_arc_.assign(m_ + n_, -1);
    parent_node_.assign(m_ + n_, -1);
    visited_.assign(m_ + n_, false);
    stack_.clear();
    stack_.push_back(start);
    visited_[start] = true;
    while (!stack_.empty()) {
      const int node = stack_.back();
      stack_.pop_back();
      if (node == goal) break;
      for (const int arc_index : adjacency_[node]) {
        const Arc& arc = arcs_[arc_index];
        const int other = node < m_ ? node_of_target(arc.j) : node_of_source(arc.i);
        if (visited_[other]) continue;
        visited_[other] = true;
        parent_arc_[other] = arc_index;
        parent_node_[other] = node;
        stack_.push_back(other);
      }
    }

    if (!visited_[goal]) {
      throw NumericalError("solve_ot: basis lost spanning-tree connectivity");
    }

    // Path arcs from the target endpoint toward the source endpoint;
    // positions 0,2,... take -theta (entering arc itself is +theta).
    cycle_.clear();
    for (int node = goal; node != start; node = parent_node_[node]) {
      cycle_.push_back(parent_arc_[node]);
    }
    std::reverse(cycle_.begin(), cycle_.end());

    double theta = std::numeric_limits<double>::infinity();
    int leaving_pos = -1;
    int leaving_cell = -1;
    for (std::size_t t = 0; t < cycle_.size(); t += 2) {
      const Arc& arc = arcs_[cycle_[t]];
      const int cell = arc.i * n_ + arc.j;
      if (arc.flow < theta || (arc.flow == theta && cell < leaving_cell)) {
        theta = arc.flow;
        leaving_pos = static_cast<int>(t);
        leaving_cell = cell;
      }
    }

    for (std::size_t t = 0; t < cycle_.size(); ++t) {
      arcs_[cycle_[t]].flow += (t % 2 == 0) ? -theta : theta;
    }

    const int slot = cycle_[leaving_pos];
    detach(slot);
    arcs_[slot] = {enter_i, enter_j, theta};
    attach(slot);
    return theta;
  }

  int m_;
  int n_;
  std::vector<double> cost_;  // row-major m x n
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
  double eps_ = 0.0;
  long cursor_ = 0;  // block-search resume point

  // Scratch reused across pivots.
  std::vector<int> stack_;
  std::vector<bool> visited_;
  std::vector<int> parent_arc_;
  std::vector<int> parent_node_;
  std::vector<int> cycle_;
};

}  // namespace

TransportPlan solve_ot(const DiscreteMeasure& source, const DiscreteMeasure& target) {
  if (source.dim() != target.dim()) {
    throw ValidationError("solve_ot: dimension mismatch (" + std::to_string(source.dim()) +
                          " vs " + std::to_string(target.dim()) + ")");
  }
  TransportationSimplex simplex(source, target);
  simplex.run();
  return simplex.extract(source, target);
}

double w2_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const double cost = solve_ot(a, b).cost;
  return std::sqrt(std::max(cost, 0.0));
}

double certificate_violation(const TransportPlan& plan, const DiscreteMeasure& source,
                             const DiscreteMeasure& target) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.plan.cols(); ++j) {
      const double c = squared_distance(source.support(), i, target.support(), j);
      const double slack = plan.source_potentials[i] + plan.target_potentials[j] - c;
      worst = std::max(worst, slack);  // feasibility: f_i + g_j <= c_ij
      if (plan.plan(i, j) > 0.0) {
        worst = std::max(worst, std::abs(slack));  // slackness on the support
      }
    }
  }
  return worst;
}

}  // namespace otbary
