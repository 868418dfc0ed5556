#include "rbfmix/solver.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/LU>

namespace rbfmix {

MixedSolution::MixedSolution(Discretization disc, Eigen::VectorXd u_coeffs, Eigen::VectorXd lambda_coeffs,
                             double residual_norm, double cond_estimate)
    : disc_(std::move(disc)),
      u_(std::move(u_coeffs)),
      lambda_(std::move(lambda_coeffs)),
      residual_norm_(residual_norm),
      cond_estimate_(cond_estimate) {
  if (static_cast<std::size_t>(u_.size()) != disc_.centers->size() ||
      static_cast<std::size_t>(lambda_.size()) != disc_.space->dim())
    throw std::invalid_argument("coefficient vectors do not match the discretization");
  hash_ = std::make_shared<SpatialHash>(disc_.centers->points, disc_.kernel.scale());
}

double MixedSolution::evaluate_u(const Point& x) const {
  double v = 0.0;
  for (std::size_t i : hash_->within(x, disc_.kernel.scale()))
    v += u_[static_cast<Eigen::Index>(i)] * disc_.kernel.eval(x, disc_.centers->points[i]);
  return v;
}

Eigen::Vector2d MixedSolution::evaluate_grad_u(const Point& x) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (std::size_t i : hash_->within(x, disc_.kernel.scale()))
    g += u_[static_cast<Eigen::Index>(i)] * disc_.kernel.grad(x, disc_.centers->points[i]);
  return g;
}

double MixedSolution::evaluate_lambda(double s) const { return disc_.space->eval(lambda_, s); }

MixedSolution solve(const SaddleSystem& system) {
  const Eigen::Index n = system.A.rows();
  const Eigen::Index m = system.B.cols();
  if (n < 1 || m < 1) throw std::invalid_argument("saddle system needs N >= 1 and M >= 1");
  if (system.A.cols() != n || system.B.rows() != n || system.F.size() != n || system.G.size() != m)
    throw std::invalid_argument("saddle system blocks have inconsistent sizes");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = Eigen::MatrixXd(system.A);
  const Eigen::MatrixXd B(system.B);
  K.topRightCorner(n, m) = B;
  K.bottomLeftCorner(m, n) = B.transpose();
  Eigen::VectorXd rhs(n + m);
  rhs << system.F, system.G;

  const double max_entry = K.cwiseAbs().maxCoeff();
  if (!(max_entry > 0.0)) throw SingularSystemError("saddle-point matrix is zero", system.params);

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= kPivotTolerance * max_entry)) {
    std::ostringstream msg;
    msg << "saddle-point matrix is numerically singular (pivot " << min_pivot << " vs max entry " << max_entry
        << "); check the stability coupling of k, h_X and r [" << system.params << "]";
    throw SingularSystemError(msg.str(), system.params);
  }
  Eigen::VectorXd x = lu.solve(rhs);
  // One step of iterative refinement.
  const Eigen::VectorXd r0 = rhs - K * x;
  x += lu.solve(r0);
  const double residual = (K * x - rhs).norm() / (system.F.norm() + system.G.norm() + 1.0);
  if (!x.allFinite()) throw SingularSystemError("saddle-point solve produced non-finite values", system.params);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  return MixedSolution(system.disc, x.head(n), -x.tail(m), residual, cond);
}

void write_solution(std::ostream& os, const MixedSolution& solution, const ParameterRecord& params) {
  const Discretization& d = solution.discretization();
  os << std::setprecision(17);
  os << "# rbfmix solution\n";
  os << "params " << to_json(params) << '\n';
  os << "kernel " << d.kernel.name() << ' ' << d.kernel.scale() << '\n';
  os << "residual " << solution.residual_norm() << '\n';
  os << "cond_estimate " << solution.cond_estimate() << '\n';
  os << "polygon " << d.polygon->vertices().size() << '\n';
  for (const auto& v : d.polygon->vertices()) os << v.x() << ' ' << v.y() << '\n';
  os << "centers " << d.centers->size() << ' ' << d.centers->fill_distance << ' ' << d.centers->separation << '\n';
  for (const auto& c : d.centers->points) os << c.x() << ' ' << c.y() << '\n';
  const auto& mesh = d.space->mesh();
  os << "multiplier " << d.space->degree() << ' ' << mesh.size() << '\n';
  for (const auto& el : mesh.elements()) os << el.edge << ' ' << el.edge_offset << ' ' << el.length() << '\n';
  os << "u " << solution.u_coeffs().size() << '\n';
  for (Eigen::Index i = 0; i < solution.u_coeffs().size(); ++i) os << solution.u_coeffs()[i] << '\n';
  os << "lambda " << solution.lambda_coeffs().size() << '\n';
  for (Eigen::Index i = 0; i < solution.lambda_coeffs().size(); ++i) os << solution.lambda_coeffs()[i] << '\n';
}

namespace {

void expect(std::istream& is, const std::string& key) {
  std::string word;
  if (!(is >> word) || word != key) throw ConfigError("solution dump: expected '" + key + "'");
}

}  // namespace

MixedSolution read_solution(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (line.rfind("# rbfmix solution", 0) != 0) throw ConfigError("not an rbfmix solution dump");
  expect(is, "params");
  std::getline(is, line);
  expect(is, "kernel");
  std::string kernel_name;
  double r = 0.0;
  is >> kernel_name >> r;
  double residual = 0.0;
  double cond = 0.0;
  expect(is, "residual");
  is >> residual;
  expect(is, "cond_estimate");
  is >> cond;
  expect(is, "polygon");
  std::size_t nv = 0;
  is >> nv;
  std::vector<Point> vertices(nv);
  for (auto& v : vertices) is >> v.x() >> v.y();
  auto polygon = std::make_shared<const Polygon>(std::move(vertices));
  expect(is, "centers");
  auto centers = std::make_shared<CenterSet>();
  std::size_t nc = 0;
  is >> nc >> centers->fill_distance >> centers->separation;
  centers->points.resize(nc);
  for (auto& c : centers->points) is >> c.x() >> c.y();
  expect(is, "multiplier");
  int degree = 0;
  std::size_t ne = 0;
  is >> degree >> ne;
  std::vector<BoundaryElement> elements;
  for (std::size_t e = 0; e < ne; ++e) {
    BoundaryElement el;
    double len = 0.0;
    is >> el.edge >> el.edge_offset >> len;
    if (!is || el.edge >= polygon->num_edges()) throw ConfigError("solution dump: bad multiplier element");
    const Edge& edge = polygon->edge(el.edge);
    el.s_start = edge.s_start + el.edge_offset;
    el.s_end = el.s_start + len;
    el.a = edge.a + el.edge_offset * edge.tangent;
    el.b = edge.a + (el.edge_offset + len) * edge.tangent;
    el.normal = edge.normal;
    elements.push_back(el);
  }
  if (!elements.empty()) elements.back().s_end = polygon->perimeter();
  for (std::size_t e = 1; e < elements.size(); ++e) elements[e].s_start = elements[e - 1].s_end;
  auto mesh = std::make_shared<const BoundaryMesh>(*polygon, std::move(elements));
  auto space = std::make_shared<const MultiplierSpace>(mesh, degree);
  auto read_vector = [&is](const std::string& key) {
    expect(is, key);
    Eigen::Index n = 0;
    is >> n;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) is >> v[i];
    if (!is) throw ConfigError("solution dump: truncated '" + key + "' block");
    return v;
  };
  Eigen::VectorXd u = read_vector("u");
  Eigen::VectorXd lambda = read_vector("lambda");
  Discretization disc{polygon, centers, WendlandKernel::from_name(kernel_name, r), space};
  return MixedSolution(std::move(disc), std::move(u), std::move(lambda), residual, cond);
}

}  // namespace rbfmix
