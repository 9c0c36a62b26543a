#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <vector>

#include "transwave/model.hpp"

namespace transwave {

struct Segment {
  double x0 = 0.0;
  double x1 = 0.0;
  std::size_t cells = 0;
  double h = 0.0;
  // index of the first node in the field that stores this segment
  std::size_t offset = 0;

  std::size_t nodes() const { return cells + 1; }
  double node(std::size_t i) const;
};

// Omega fields (u, ut and every z row) store the left segment followed by the
// right one; the middle field v stores the elastic segment. Interface values
// are duplicated: u[left_interface()] pairs with v[0] at L1 and
// u[right_interface()] with v.back() at L2.
struct SpatialGrid {
  Segment left;
  Segment middle;
  Segment right;
  std::vector<double> x_omega;
  std::vector<double> x_mid;
  double h_min = 0.0;
  double h_max = 0.0;

  std::size_t n_omega() const { return x_omega.size(); }
  std::size_t n_mid() const { return x_mid.size(); }
  std::size_t left_interface() const { return left.cells; }
  std::size_t right_interface() const { return right.offset; }
};

struct RhoGrid {
  std::vector<double> nodes;
  double d_rho = 0.0;

  std::size_t size() const { return nodes.size(); }
};

struct Grids {
  SpatialGrid space;
  RhoGrid rho;
};

// Each segment gets ceil(length / target_h) cells. Throws resolution_error
// when target_h is not below the shortest segment or n_rho < 2.
Grids build_grid(const DomainGeometry& geom, double target_h, std::size_t n_rho);

struct StateSnapshot {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> ut;
  std::vector<double> v;
  std::vector<double> vt;
  // z[j * n_omega + i] is z(x_i, rho_j)
  std::vector<double> z;

  const double* z_row(std::size_t j) const { return z.data() + j * u.size(); }
  double* z_row(std::size_t j) { return z.data() + j * u.size(); }
};

// Samples the initial data; throws inconsistent_initial_data when boundary,
// interface or history compatibility fails.
StateSnapshot initialize_state(const ProblemSpec& spec, const Grids& grids);

// Time-ordered ut fields on Omega nodes, retaining [t - tau1 - 2 dt, t].
class HistoryBuffer {
 public:
  HistoryBuffer(double dt, double tau1);

  // t must exceed the last timestamp by dt; throws ordering_error otherwise.
  void push(double t, std::vector<double> field);

  // Linear in time between the bracketing entries; exact at stored
  // timestamps. Throws history_underflow outside the stored span.
  void interpolate(double query, std::vector<double>& out) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double front_time() const { return entries_.front().t; }
  double back_time() const { return entries_.back().t; }

 private:
  struct Entry {
    double t;
    std::vector<double> field;
  };

  double dt_;
  double tau1_;
  std::deque<Entry> entries_;
};

// CSV with columns x, segment, displacement, velocity; segment ids 0, 1, 2
// from left to right. Interface nodes appear once per adjacent segment.
void write_snapshot_csv(std::ostream& os, const StateSnapshot& state, const SpatialGrid& grid);

}  // namespace transwave
