#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlocate/bits.hpp"
#include "qlocate/ising.hpp"

namespace qlocate {

enum class Metric { SquaredEuclidean, Euclidean, Manhattan };

/// Unit-spaced rows x cols lattice. A line of n nodes is a 1 x n grid.
/// Node index = row * cols + col.
struct Geometry {
  int rows = 1;
  int cols = 1;

  static Geometry line(int n) { return {1, n}; }
  static Geometry grid(int rows, int cols) { return {rows, cols}; }

  int nodes() const { return rows * cols; }
  bool is_line() const { return rows == 1; }
  std::pair<int, int> coords(int node) const { return {node / cols, node % cols}; }
};

struct FacilityProblem {
  Geometry geometry;
  int ambulances = 1;
  Metric metric = Metric::SquaredEuclidean;
  std::optional<double> lambda;
  std::optional<double> lambda_ratio;
  bool forbid_colocation = false;

  /// Checks the invariants. Throws InputError.
  void validate() const;
  /// Explicit lambda, or lambda_ratio times the largest pairwise distance.
  double penalty_weight() const;
};

enum class EncodingVariant { ComplementSingle, StartDest, PositionLinear };

struct QubitRole {
  enum class Kind { Start, Dest, Location };
  Kind kind = Kind::Location;
  int ambulance = 0;
  int node = 0;
};

struct HammingTarget {
  std::vector<int> qubits;
  int weight = 0;
};

struct Encoding {
  EncodingVariant variant = EncodingVariant::ComplementSingle;
  int n_qubits = 0;
  std::vector<QubitRole> qubit_roles;
  std::vector<HammingTarget> hamming_targets;
  FacilityProblem problem;
  int c = 0;                         ///< target weight of ComplementSingle
  double lambda = 0.0;               ///< penalty weight used to build the model
  bool cardinality_penalty = false;  ///< PositionLinear only
  std::vector<std::vector<double>> distances;

  int start_qubit(int a, int node) const;
  int dest_qubit(int a, int node) const;
};

struct Placement {
  std::vector<int> positions;
  std::vector<int> assignments;
  double total_distance = 0.0;
};

struct EncodedProblem {
  QuboModel model;
  Encoding encoding;
};

double metric_distance(const Geometry& g, Metric metric, int a, int b);
std::vector<std::vector<double>> distance_matrix(const FacilityProblem& problem);
double max_distance(const FacilityProblem& problem);

/// One ambulance on L nodes; a '0' marks the ambulance, target weight L-1.
EncodedProblem encode_single_complement(const FacilityProblem& problem);
/// One-hot start and destination blocks, 2*m*L qubits.
EncodedProblem encode_start_dest(const FacilityProblem& problem);
/// L qubits, '1' marks an ambulance, objective is the summed distance to every node.
EncodedProblem encode_position_linear(const FacilityProblem& problem, bool cardinality_penalty);

/// Same encoding at a different penalty weight.
EncodedProblem reencode(const Encoding& encoding, double lambda);
/// Same encoding with the penalty removed.
QuboModel core_model(const Encoding& encoding);

bool satisfies_hamming_targets(const Encoding& encoding, Index s);
bool is_feasible(const Encoding& encoding, Index s);
bool is_feasible(const Encoding& encoding, const std::string& s);

Placement decode_solution(const Encoding& encoding, Index s);
Placement decode_solution(const Encoding& encoding, const std::string& s);

/// Number of states meeting every Hamming target.
double hamming_target_count(const Encoding& encoding);

/// Named variants A-J. `lambda` overrides the preset penalty weight.
EncodedProblem preset_problem(char variant, std::optional<double> lambda = std::nullopt);

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& s);
std::string to_string(EncodingVariant variant);

/// Reads the key-value problem description.
FacilityProblem problem_from_text(const std::string& text);

}  // namespace qlocate
