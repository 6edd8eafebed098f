#include "ivlab/body.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ivlab/detail/overloaded.hpp"
#include "ivlab/errors.hpp"

namespace ivlab {

using detail::overloaded;

namespace {

Body wrap(BodyNode node) { return Body(std::make_shared<const BodyNode>(std::move(node))); }

void require_finite_nonneg(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0)
        throw InputError(std::string(what) + " must be a finite nonnegative number");
}

void require_dim(const Body& body, const Eigen::VectorXd& x) {
    if (x.size() != ambient_dim(body))
        throw InputError("point has dimension " + std::to_string(x.size()) + ", body lives in R^" +
                         std::to_string(ambient_dim(body)));
}

}  // namespace

bool operator==(const Body& a, const Body& b) {
    if (a.node_ == b.node_) return true;
    const auto& sa = a.node().shape;
    const auto& sb = b.node().shape;
    if (sa.index() != sb.index()) return false;
    return std::visit(
        overloaded{
            [&](const shape::Point& p) { return p.dim == std::get<shape::Point>(sb).dim; },
            [&](const shape::Ball& p) {
                const auto& q = std::get<shape::Ball>(sb);
                return p.dim == q.dim && p.radius == q.radius;
            },
            [&](const shape::Box& p) { return p.lengths == std::get<shape::Box>(sb).lengths; },
            [&](const shape::Product& p) {
                const auto& q = std::get<shape::Product>(sb);
                return p.left == q.left && p.right == q.right;
            },
            [&](const shape::Scaled& p) {
                const auto& q = std::get<shape::Scaled>(sb);
                return p.factor == q.factor && p.inner == q.inner;
            },
            [&](const shape::Translated& p) {
                const auto& q = std::get<shape::Translated>(sb);
                return p.offset == q.offset && p.inner == q.inner;
            },
            [&](const shape::Embedded& p) {
                const auto& q = std::get<shape::Embedded>(sb);
                return p.extra_dims == q.extra_dims && p.inner == q.inner;
            },
        },
        sa);
}

Body make_point(int dim) {
    if (dim < 1) throw InputError("point dimension must be >= 1");
    return wrap({shape::Point{dim}});
}

Body make_ball(int dim, double radius) {
    if (dim < 1) throw InputError("ball dimension must be >= 1");
    require_finite_nonneg(radius, "ball radius");
    return wrap({shape::Ball{dim, radius}});
}

Body make_box(std::vector<double> lengths) {
    if (lengths.empty()) throw InputError("box needs at least one side length");
    for (double s : lengths) require_finite_nonneg(s, "box side length");
    return wrap({shape::Box{std::move(lengths)}});
}

Body make_cube(int dim, double side) {
    if (dim < 1) throw InputError("cube dimension must be >= 1");
    return make_box(std::vector<double>(static_cast<std::size_t>(dim), side));
}

Body make_product(Body left, Body right) {
    return wrap({shape::Product{std::move(left), std::move(right)}});
}

Body make_scaled(double factor, Body inner) {
    require_finite_nonneg(factor, "scale factor");
    return wrap({shape::Scaled{factor, std::move(inner)}});
}

Body make_translated(Eigen::VectorXd offset, Body inner) {
    if (offset.size() != ambient_dim(inner)) throw InputError("translation offset has wrong dimension");
    if (!offset.allFinite()) throw InputError("translation offset must be finite");
    return wrap({shape::Translated{std::move(offset), std::move(inner)}});
}

Body make_embedded(Body inner, int extra_dims) {
    if (extra_dims < 0) throw InputError("embedding needs a nonnegative number of extra dimensions");
    return wrap({shape::Embedded{std::move(inner), extra_dims}});
}

int ambient_dim(const Body& body) {
    return std::visit(overloaded{
                          [](const shape::Point& p) { return p.dim; },
                          [](const shape::Ball& p) { return p.dim; },
                          [](const shape::Box& p) { return static_cast<int>(p.lengths.size()); },
                          [](const shape::Product& p) { return ambient_dim(p.left) + ambient_dim(p.right); },
                          [](const shape::Scaled& p) { return ambient_dim(p.inner); },
                          [](const shape::Translated& p) { return ambient_dim(p.inner); },
                          [](const shape::Embedded& p) { return ambient_dim(p.inner) + p.extra_dims; },
                      },
                      body.node().shape);
}

int intrinsic_dim(const Body& body) {
    return std::visit(overloaded{
                          [](const shape::Point&) { return 0; },
                          [](const shape::Ball& p) { return p.radius > 0.0 ? p.dim : 0; },
                          [](const shape::Box& p) {
                              int k = 0;
                              for (double s : p.lengths) k += s > 0.0 ? 1 : 0;
                              return k;
                          },
                          [](const shape::Product& p) { return intrinsic_dim(p.left) + intrinsic_dim(p.right); },
                          [](const shape::Scaled& p) { return p.factor > 0.0 ? intrinsic_dim(p.inner) : 0; },
                          [](const shape::Translated& p) { return intrinsic_dim(p.inner); },
                          [](const shape::Embedded& p) { return intrinsic_dim(p.inner); },
                      },
                      body.node().shape);
}

namespace {

Eigen::VectorXd project_unchecked(const Body& body, const Eigen::VectorXd& x) {
    return std::visit(
        overloaded{
            [&](const shape::Point& p) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(p.dim); },
            [&](const shape::Ball& p) -> Eigen::VectorXd {
                const double norm = x.norm();
                if (norm <= p.radius) return x;
                return x * (p.radius / norm);
            },
            [&](const shape::Box& p) -> Eigen::VectorXd {
                Eigen::VectorXd y(x.size());
                for (Eigen::Index i = 0; i < x.size(); ++i)
                    y[i] = std::clamp(x[i], 0.0, p.lengths[static_cast<std::size_t>(i)]);
                return y;
            },
            [&](const shape::Product& p) -> Eigen::VectorXd {
                const int n1 = ambient_dim(p.left);
                const int n2 = ambient_dim(p.right);
                Eigen::VectorXd y(n1 + n2);
                y.head(n1) = project_unchecked(p.left, x.head(n1));
                y.tail(n2) = project_unchecked(p.right, x.tail(n2));
                return y;
            },
            [&](const shape::Scaled& p) -> Eigen::VectorXd {
                if (p.factor == 0.0) return Eigen::VectorXd::Zero(x.size());
                return p.factor * project_unchecked(p.inner, x / p.factor);
            },
            [&](const shape::Translated& p) -> Eigen::VectorXd {
                return p.offset + project_unchecked(p.inner, x - p.offset);
            },
            [&](const shape::Embedded& p) -> Eigen::VectorXd {
                const int n1 = ambient_dim(p.inner);
                Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
                y.head(n1) = project_unchecked(p.inner, x.head(n1));
                return y;
            },
        },
        body.node().shape);
}

// Squared distance computed structurally; products and embeddings add
// per-factor squared distances, which avoids rounding in the difference.
double sqdist_unchecked(const Body& body, const Eigen::VectorXd& x) {
    return std::visit(
        overloaded{
            [&](const shape::Point&) { return x.squaredNorm(); },
            [&](const shape::Ball& p) {
                const double gap = x.norm() - p.radius;
                return gap > 0.0 ? gap * gap : 0.0;
            },
            [&](const shape::Box& p) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < x.size(); ++i) {
                    const double s = p.lengths[static_cast<std::size_t>(i)];
                    const double gap = x[i] < 0.0 ? -x[i] : (x[i] > s ? x[i] - s : 0.0);
                    acc += gap * gap;
                }
                return acc;
            },
            [&](const shape::Product& p) {
                const int n1 = ambient_dim(p.left);
                const int n2 = ambient_dim(p.right);
                return sqdist_unchecked(p.left, x.head(n1)) + sqdist_unchecked(p.right, x.tail(n2));
            },
            [&](const shape::Scaled& p) {
                if (p.factor == 0.0) return x.squaredNorm();
                return p.factor * p.factor * sqdist_unchecked(p.inner, x / p.factor);
            },
            [&](const shape::Translated& p) { return sqdist_unchecked(p.inner, x - p.offset); },
            [&](const shape::Embedded& p) {
                const int n1 = ambient_dim(p.inner);
                return sqdist_unchecked(p.inner, x.head(n1)) + x.tail(p.extra_dims).squaredNorm();
            },
        },
        body.node().shape);
}

}  // namespace

Eigen::VectorXd project(const Body& body, const Eigen::VectorXd& x) {
    require_dim(body, x);
    return project_unchecked(body, x);
}

double squared_distance(const Body& body, const Eigen::VectorXd& x) {
    require_dim(body, x);
    return sqdist_unchecked(body, x);
}

double distance(const Body& body, const Eigen::VectorXd& x) { return std::sqrt(squared_distance(body, x)); }

bool contains(const Body& body, const Eigen::VectorXd& x, double tol) { return distance(body, x) <= tol; }

EnclosingBall enclosing_ball(const Body& body) {
    return std::visit(
        overloaded{
            [](const shape::Point& p) { return EnclosingBall{Eigen::VectorXd::Zero(p.dim), 0.0}; },
            [](const shape::Ball& p) { return EnclosingBall{Eigen::VectorXd::Zero(p.dim), p.radius}; },
            [](const shape::Box& p) {
                Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(p.lengths.data(),
                                                                      static_cast<Eigen::Index>(p.lengths.size()));
                return EnclosingBall{s / 2.0, s.norm() / 2.0};
            },
            [](const shape::Product& p) {
                const auto a = enclosing_ball(p.left);
                const auto b = enclosing_ball(p.right);
                Eigen::VectorXd c(a.center.size() + b.center.size());
                c << a.center, b.center;
                return EnclosingBall{c, std::hypot(a.radius, b.radius)};
            },
            [](const shape::Scaled& p) {
                const auto a = enclosing_ball(p.inner);
                return EnclosingBall{p.factor * a.center, p.factor * a.radius};
            },
            [](const shape::Translated& p) {
                const auto a = enclosing_ball(p.inner);
                return EnclosingBall{a.center + p.offset, a.radius};
            },
            [](const shape::Embedded& p) {
                const auto a = enclosing_ball(p.inner);
                Eigen::VectorXd c = Eigen::VectorXd::Zero(a.center.size() + p.extra_dims);
                c.head(a.center.size()) = a.center;
                return EnclosingBall{c, a.radius};
            },
        },
        body.node().shape);
}

double AxisBox::volume() const { return (upper - lower).prod(); }

AxisBox bounding_box(const Body& body) {
    return std::visit(
        overloaded{
            [](const shape::Point& p) {
                return AxisBox{Eigen::VectorXd::Zero(p.dim), Eigen::VectorXd::Zero(p.dim)};
            },
            [](const shape::Ball& p) {
                return AxisBox{Eigen::VectorXd::Constant(p.dim, -p.radius),
                               Eigen::VectorXd::Constant(p.dim, p.radius)};
            },
            [](const shape::Box& p) {
                const auto n = static_cast<Eigen::Index>(p.lengths.size());
                return AxisBox{Eigen::VectorXd::Zero(n), Eigen::Map<const Eigen::VectorXd>(p.lengths.data(), n)};
            },
            [](const shape::Product& p) {
                const auto a = bounding_box(p.left);
                const auto b = bounding_box(p.right);
                AxisBox out{Eigen::VectorXd(a.lower.size() + b.lower.size()),
                            Eigen::VectorXd(a.lower.size() + b.lower.size())};
                out.lower << a.lower, b.lower;
                out.upper << a.upper, b.upper;
                return out;
            },
            [](const shape::Scaled& p) {
                const auto a = bounding_box(p.inner);
                return AxisBox{p.factor * a.lower, p.factor * a.upper};
            },
            [](const shape::Translated& p) {
                const auto a = bounding_box(p.inner);
                return AxisBox{a.lower + p.offset, a.upper + p.offset};
            },
            [](const shape::Embedded& p) {
                const auto a = bounding_box(p.inner);
                const auto n = a.lower.size() + p.extra_dims;
                AxisBox out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
                out.lower.head(a.lower.size()) = a.lower;
                out.upper.head(a.upper.size()) = a.upper;
                return out;
            },
        },
        body.node().shape);
}

std::optional<AxisBox> as_axis_box(const Body& body) {
    return std::visit(
        overloaded{
            [&](const shape::Point&) -> std::optional<AxisBox> { return bounding_box(body); },
            [&](const shape::Ball& p) -> std::optional<AxisBox> {
                if (p.radius == 0.0) return bounding_box(body);
                return std::nullopt;
            },
            [&](const shape::Box&) -> std::optional<AxisBox> { return bounding_box(body); },
            [&](const shape::Product& p) -> std::optional<AxisBox> {
                if (!as_axis_box(p.left) || !as_axis_box(p.right)) return std::nullopt;
                return bounding_box(body);
            },
            [&](const shape::Scaled& p) -> std::optional<AxisBox> {
                if (p.factor == 0.0 || as_axis_box(p.inner)) return bounding_box(body);
                return std::nullopt;
            },
            [&](const shape::Translated& p) -> std::optional<AxisBox> {
                if (!as_axis_box(p.inner)) return std::nullopt;
                return bounding_box(body);
            },
            [&](const shape::Embedded& p) -> std::optional<AxisBox> {
                if (!as_axis_box(p.inner)) return std::nullopt;
                return bounding_box(body);
            },
        },
        body.node().shape);
}

std::optional<EnclosingBall> as_ball(const Body& body) {
    return std::visit(
        overloaded{
            [](const shape::Point& p) -> std::optional<EnclosingBall> {
                return EnclosingBall{Eigen::VectorXd::Zero(p.dim), 0.0};
            },
            [](const shape::Ball& p) -> std::optional<EnclosingBall> {
                return EnclosingBall{Eigen::VectorXd::Zero(p.dim), p.radius};
            },
            [](const shape::Box&) -> std::optional<EnclosingBall> { return std::nullopt; },
            [](const shape::Product&) -> std::optional<EnclosingBall> { return std::nullopt; },
            [](const shape::Scaled& p) -> std::optional<EnclosingBall> {
                auto a = as_ball(p.inner);
                if (!a) return std::nullopt;
                return EnclosingBall{p.factor * a->center, p.factor * a->radius};
            },
            [](const shape::Translated& p) -> std::optional<EnclosingBall> {
                auto a = as_ball(p.inner);
                if (!a) return std::nullopt;
                return EnclosingBall{a->center + p.offset, a->radius};
            },
            [](const shape::Embedded&) -> std::optional<EnclosingBall> { return std::nullopt; },
        },
        body.node().shape);
}

}  // namespace ivlab
