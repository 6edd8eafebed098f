#pragma once

// Compositional convex bodies with exact Euclidean projection.
//
// A Body is an immutable tree built from a few primitives (point, ball,
// axis-aligned box) and combinators (orthogonal product, dilation,
// translation, embedding into a larger space). Every node has a closed-form
// nearest-point map, so distance and membership are exact.

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ivlab {

struct BodyNode;

class Body {
public:
    explicit Body(std::shared_ptr<const BodyNode> node) : node_(std::move(node)) {}

    const BodyNode& node() const { return *node_; }

    friend bool operator==(const Body& a, const Body& b);

private:
    std::shared_ptr<const BodyNode> node_;
};

namespace shape {

// The origin of R^dim.
struct Point {
    int dim;
};

// Closed ball of the given radius centered at the origin.
struct Ball {
    int dim;
    double radius;
};

// [0, l_1] x ... x [0, l_n].
struct Box {
    std::vector<double> lengths;
};

// left x right in the concatenated space.
struct Product {
    Body left;
    Body right;
};

struct Scaled {
    double factor;
    Body inner;
};

struct Translated {
    Eigen::VectorXd offset;
    Body inner;
};

// inner x {0_extra}.
struct Embedded {
    Body inner;
    int extra_dims;
};

}  // namespace shape

struct BodyNode {
    std::variant<shape::Point, shape::Ball, shape::Box, shape::Product, shape::Scaled,
                 shape::Translated, shape::Embedded>
        shape;
};

// Factories validate their arguments and throw InputError on violation.
Body make_point(int dim);
Body make_ball(int dim, double radius);
Body make_box(std::vector<double> lengths);
// The cube [0, side]^dim as a Box.
Body make_cube(int dim, double side = 1.0);
Body make_product(Body left, Body right);
Body make_scaled(double factor, Body inner);
Body make_translated(Eigen::VectorXd offset, Body inner);
Body make_embedded(Body inner, int extra_dims);

int ambient_dim(const Body& body);
int intrinsic_dim(const Body& body);

Eigen::VectorXd project(const Body& body, const Eigen::VectorXd& x);
double distance(const Body& body, const Eigen::VectorXd& x);
double squared_distance(const Body& body, const Eigen::VectorXd& x);
bool contains(const Body& body, const Eigen::VectorXd& x, double tol = 0.0);

struct EnclosingBall {
    Eigen::VectorXd center;
    double radius;
};

// A ball covering the body. Conservative, not minimal.
EnclosingBall enclosing_ball(const Body& body);

struct AxisBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    double volume() const;
};

// Axis-aligned bounding box of the body.
AxisBox bounding_box(const Body& body);

// If the body is an axis-aligned box (possibly with zero-length sides), return
// it. Covers Box, Point, and any Product/Scaled/Translated/Embedded tree of them.
std::optional<AxisBox> as_axis_box(const Body& body);

// If the body is a (scaled, translated) ball, return its center and radius.
std::optional<EnclosingBall> as_ball(const Body& body);

}  // namespace ivlab
