#include "qlocate/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "qlocate/error.hpp"

namespace qlocate {

void FacilityProblem::validate() const {
  if (geometry.rows < 1 || geometry.cols < 1) throw InputError("geometry must have at least one node");
  if (ambulances < 1) throw InputError("ambulance count must be positive");
  if (ambulances > geometry.nodes()) throw InputError("more ambulances than nodes");
  if (lambda.has_value() == lambda_ratio.has_value()) {
    throw InputError("exactly one of lambda and lambda_ratio must be set");
  }
  if (lambda && *lambda < 0) throw InputError("lambda must be non-negative");
  if (lambda_ratio && *lambda_ratio < 0) throw InputError("lambda_ratio must be non-negative");
}

double FacilityProblem::penalty_weight() const {
  validate();
  if (lambda) return *lambda;
  return *lambda_ratio * max_distance(*this);
}

int Encoding::start_qubit(int a, int node) const {
  return a * problem.geometry.nodes() + node;
}

int Encoding::dest_qubit(int a, int node) const {
  const int L = problem.geometry.nodes();
  return problem.ambulances * L + a * L + node;
}

double metric_distance(const Geometry& g, Metric metric, int a, int b) {
  auto [ra, ca] = g.coords(a);
  auto [rb, cb] = g.coords(b);
  const double dr = ra - rb;
  const double dc = ca - cb;
  switch (metric) {
    case Metric::SquaredEuclidean:
      return dr * dr + dc * dc;
    case Metric::Euclidean:
      return std::sqrt(dr * dr + dc * dc);
    case Metric::Manhattan:
      return std::abs(dr) + std::abs(dc);
  }
  return 0.0;
}

std::vector<std::vector<double>> distance_matrix(const FacilityProblem& problem) {
  const int L = problem.geometry.nodes();
  std::vector<std::vector<double>> d(static_cast<size_t>(L), std::vector<double>(static_cast<size_t>(L)));
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      d[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          metric_distance(problem.geometry, problem.metric, i, j);
    }
  }
  return d;
}

double max_distance(const FacilityProblem& problem) {
  double best = 0.0;
  for (const auto& row : distance_matrix(problem)) {
    for (double v : row) best = std::max(best, v);
  }
  return best;
}

namespace {

// lambda * (sum_k x_k - target)^2 over the given qubits, constant included.
void add_squared_constraint(QuboModel& q, const std::vector<int>& qubits, int target, double lambda,
                            bool include_constant) {
  for (size_t a = 0; a < qubits.size(); ++a) {
    q.add_linear(qubits[a], lambda * (1.0 - 2.0 * target));
    for (size_t b = a + 1; b < qubits.size(); ++b) q.add_quadratic(qubits[a], qubits[b], 2.0 * lambda);
  }
  if (include_constant) q.add_offset(lambda * target * target);
}

double distance(const Encoding& e, int a, int b) {
  return e.distances[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

}  // namespace

EncodedProblem encode_single_complement(const FacilityProblem& problem) {
  if (problem.ambulances != 1) {
    throw EncodingError("complement encoding requires exactly one ambulance, got " +
                        std::to_string(problem.ambulances));
  }
  const double lambda = problem.penalty_weight();
  const int L = problem.geometry.nodes();
  Encoding e;
  e.variant = EncodingVariant::ComplementSingle;
  e.n_qubits = L;
  e.problem = problem;
  e.c = L - 1;
  e.lambda = lambda;
  e.distances = distance_matrix(problem);
  std::vector<int> all(static_cast<size_t>(L));
  for (int i = 0; i < L; ++i) {
    all[static_cast<size_t>(i)] = i;
    e.qubit_roles.push_back({QubitRole::Kind::Location, 0, i});
  }
  e.hamming_targets.push_back({all, e.c});

  QuboModel q(L);
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) q.add_quadratic(i, j, -distance(e, i, j));
  }
  add_squared_constraint(q, all, e.c, lambda, false);
  return {std::move(q), std::move(e)};
}

EncodedProblem encode_start_dest(const FacilityProblem& problem) {
  const double lambda = problem.penalty_weight();
  const int L = problem.geometry.nodes();
  const int m = problem.ambulances;
  Encoding e;
  e.variant = EncodingVariant::StartDest;
  e.n_qubits = 2 * m * L;
  e.problem = problem;
  e.lambda = lambda;
  e.distances = distance_matrix(problem);
  e.qubit_roles.resize(static_cast<size_t>(e.n_qubits));
  std::vector<int> dest_all;
  for (int a = 0; a < m; ++a) {
    std::vector<int> block;
    for (int i = 0; i < L; ++i) {
      e.qubit_roles[static_cast<size_t>(e.start_qubit(a, i))] = {QubitRole::Kind::Start, a, i};
      e.qubit_roles[static_cast<size_t>(e.dest_qubit(a, i))] = {QubitRole::Kind::Dest, a, i};
      block.push_back(e.start_qubit(a, i));
    }
    e.hamming_targets.push_back({block, 1});
  }
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < L; ++i) dest_all.push_back(e.dest_qubit(a, i));
  }
  e.hamming_targets.push_back({dest_all, L});

  QuboModel q(e.n_qubits);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < L; ++i) {
      for (int l = 0; l < L; ++l) q.add_quadratic(e.start_qubit(a, i), e.dest_qubit(a, l), distance(e, i, l));
    }
  }
  for (int a = 0; a < m; ++a) add_squared_constraint(q, e.hamming_targets[static_cast<size_t>(a)].qubits, 1, lambda, true);
  for (int l = 0; l < L; ++l) {
    std::vector<int> servers;
    for (int a = 0; a < m; ++a) servers.push_back(e.dest_qubit(a, l));
    add_squared_constraint(q, servers, 1, lambda, true);
  }
  if (problem.forbid_colocation && m >= 2) {
    for (int i = 0; i < L; ++i) q.add_quadratic(e.start_qubit(0, i), e.start_qubit(1, i), lambda);
  }
  return {std::move(q), std::move(e)};
}

EncodedProblem encode_position_linear(const FacilityProblem& problem, bool cardinality_penalty) {
  problem.validate();
  const int L = problem.geometry.nodes();
  const double lambda = cardinality_penalty ? problem.penalty_weight() : 0.0;
  Encoding e;
  e.variant = EncodingVariant::PositionLinear;
  e.n_qubits = L;
  e.problem = problem;
  e.lambda = lambda;
  e.cardinality_penalty = cardinality_penalty;
  e.distances = distance_matrix(problem);
  std::vector<int> all(static_cast<size_t>(L));
  for (int i = 0; i < L; ++i) {
    all[static_cast<size_t>(i)] = i;
    e.qubit_roles.push_back({QubitRole::Kind::Location, 0, i});
  }
  e.hamming_targets.push_back({all, problem.ambulances});

  QuboModel q(L);
  for (int i = 0; i < L; ++i) {
    double field = 0.0;
    for (int l = 0; l < L; ++l) field += distance(e, i, l);
    q.add_linear(i, field);
  }
  if (cardinality_penalty) add_squared_constraint(q, all, problem.ambulances, lambda, true);
  return {std::move(q), std::move(e)};
}

EncodedProblem reencode(const Encoding& encoding, double lambda) {
  FacilityProblem p = encoding.problem;
  p.lambda = lambda;
  p.lambda_ratio.reset();
  switch (encoding.variant) {
    case EncodingVariant::ComplementSingle:
      return encode_single_complement(p);
    case EncodingVariant::StartDest:
      return encode_start_dest(p);
    case EncodingVariant::PositionLinear:
      return encode_position_linear(p, encoding.cardinality_penalty);
  }
  throw EncodingError("unknown encoding variant");
}

QuboModel core_model(const Encoding& encoding) { return reencode(encoding, 0.0).model; }

bool satisfies_hamming_targets(const Encoding& encoding, Index s) {
  for (const auto& t : encoding.hamming_targets) {
    int w = 0;
    for (int q : t.qubits) w += bit(s, q);
    if (w != t.weight) return false;
  }
  return true;
}

bool is_feasible(const Encoding& encoding, Index s) {
  if (!satisfies_hamming_targets(encoding, s)) return false;
  if (encoding.variant == EncodingVariant::StartDest) {
    const int L = encoding.problem.geometry.nodes();
    for (int l = 0; l < L; ++l) {
      int served = 0;
      for (int a = 0; a < encoding.problem.ambulances; ++a) served += bit(s, encoding.dest_qubit(a, l));
      if (served != 1) return false;
    }
    if (encoding.problem.forbid_colocation && encoding.problem.ambulances >= 2) {
      for (int i = 0; i < L; ++i) {
        if (bit(s, encoding.start_qubit(0, i)) && bit(s, encoding.start_qubit(1, i))) return false;
      }
    }
  }
  return true;
}

bool is_feasible(const Encoding& encoding, const std::string& s) {
  return is_feasible(encoding, from_bitstring(s, encoding.n_qubits));
}

Placement decode_solution(const Encoding& encoding, Index s) {
  if (!is_feasible(encoding, s)) {
    throw ContractError("cannot decode infeasible state " + to_bitstring(s, encoding.n_qubits));
  }
  const int L = encoding.problem.geometry.nodes();
  Placement p;
  switch (encoding.variant) {
    case EncodingVariant::ComplementSingle: {
      for (int i = 0; i < L; ++i) {
        if (!bit(s, i)) p.positions.push_back(i);
      }
      p.assignments.assign(static_cast<size_t>(L), 0);
      break;
    }
    case EncodingVariant::StartDest: {
      for (int a = 0; a < encoding.problem.ambulances; ++a) {
        for (int i = 0; i < L; ++i) {
          if (bit(s, encoding.start_qubit(a, i))) p.positions.push_back(i);
        }
      }
      p.assignments.assign(static_cast<size_t>(L), 0);
      for (int l = 0; l < L; ++l) {
        for (int a = 0; a < encoding.problem.ambulances; ++a) {
          if (bit(s, encoding.dest_qubit(a, l))) p.assignments[static_cast<size_t>(l)] = a;
        }
      }
      break;
    }
    case EncodingVariant::PositionLinear: {
      for (int i = 0; i < L; ++i) {
        if (bit(s, i)) p.positions.push_back(i);
      }
      p.assignments.assign(static_cast<size_t>(L), 0);
      for (int l = 0; l < L; ++l) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < p.positions.size(); ++a) {
          const double d = distance(encoding, l, p.positions[a]);
          if (d < best) {
            best = d;
            p.assignments[static_cast<size_t>(l)] = static_cast<int>(a);
          }
        }
      }
      break;
    }
  }
  for (int l = 0; l < L; ++l) {
    p.total_distance +=
        distance(encoding, l, p.positions[static_cast<size_t>(p.assignments[static_cast<size_t>(l)])]);
  }
  return p;
}

Placement decode_solution(const Encoding& encoding, const std::string& s) {
  return decode_solution(encoding, from_bitstring(s, encoding.n_qubits));
}

double hamming_target_count(const Encoding& encoding) {
  double count = 1.0;
  for (const auto& t : encoding.hamming_targets) {
    count *= binomial(static_cast<int>(t.qubits.size()), t.weight);
  }
  return count;
}

EncodedProblem preset_problem(char variant, std::optional<double> lambda) {
  FacilityProblem p;
  auto with_lambda = [&](double fallback) {
    p.lambda = lambda.value_or(fallback);
  };
  switch (variant) {
    case 'A':
      p.geometry = Geometry::line(5);
      with_lambda(40.0);
      return encode_single_complement(p);
    case 'B':
      p.geometry = Geometry::line(4);
      p.ambulances = 2;
      with_lambda(6.0);
      return encode_start_dest(p);
    case 'C':
      p.geometry = Geometry::line(8);
      p.ambulances = 2;
      with_lambda(49.0);
      return encode_position_linear(p, true);
    case 'D':
    case 'F':
      p.geometry = Geometry::line(17);
      with_lambda(256.0);
      return encode_single_complement(p);
    case 'E':
      p.geometry = Geometry::line(5);
      p.ambulances = 2;
      with_lambda(16.0);
      return encode_start_dest(p);
    case 'G':
    case 'H':
    case 'I':
    case 'J': {
      const int side = variant == 'G' ? 0 : variant - 'H' + 3;
      p.geometry = variant == 'G' ? Geometry::grid(3, 2) : Geometry::grid(side, side);
      p.ambulances = 2;
      if (lambda) {
        p.lambda = *lambda;
      } else {
        p.lambda_ratio = 1.0;
      }
      return encode_start_dest(p);
    }
    default:
      throw InputError(std::string("unknown problem variant '") + variant + "'");
  }
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::SquaredEuclidean:
      return "squared-euclidean";
    case Metric::Euclidean:
      return "euclidean";
    case Metric::Manhattan:
      return "manhattan";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  if (s == "squared-euclidean") return Metric::SquaredEuclidean;
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "manhattan") return Metric::Manhattan;
  throw InputError("unknown metric: " + s);
}

std::string to_string(EncodingVariant variant) {
  switch (variant) {
    case EncodingVariant::ComplementSingle:
      return "complement-single";
    case EncodingVariant::StartDest:
      return "start-dest";
    case EncodingVariant::PositionLinear:
      return "position-linear";
  }
  return "?";
}

FacilityProblem problem_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    if (key.back() == '=' || key.back() == ':') key.pop_back();
    ls >> value;
    if (value == "=" || value == ":") ls >> value;
    if (value.empty()) throw InputError("missing value for key " + key);
    kv[key] = value;
  }
  FacilityProblem p;
  auto get_int = [&](const std::string& k, int fallback) {
    return kv.count(k) ? std::stoi(kv[k]) : fallback;
  };
  const std::string geometry = kv.count("geometry") ? kv["geometry"] : "grid";
  if (geometry == "line") {
    p.geometry = Geometry::line(get_int("cols", get_int("nodes", 1)));
  } else if (geometry == "grid") {
    p.geometry = Geometry::grid(get_int("rows", 1), get_int("cols", 1));
  } else {
    throw InputError("unknown geometry: " + geometry);
  }
  p.ambulances = get_int("ambulances", 1);
  if (kv.count("metric")) p.metric = metric_from_string(kv["metric"]);
  if (kv.count("lambda")) p.lambda = std::stod(kv["lambda"]);
  if (kv.count("lambda_ratio")) p.lambda_ratio = std::stod(kv["lambda_ratio"]);
  if (!p.lambda && !p.lambda_ratio) p.lambda_ratio = 1.0;
  if (kv.count("forbid_colocation")) {
    const std::string v = kv["forbid_colocation"];
    p.forbid_colocation = (v == "true" || v == "1" || v == "yes");
  }
  p.validate();
  return p;
}

}  // namespace qlocate
