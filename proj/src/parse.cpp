#include "ivlab/parse.hpp"

#include <charconv>
#include <limits>
#include <vector>

#include "ivlab/detail/overloaded.hpp"

namespace ivlab {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Body parse() {
        Body b = body();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return b;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

    bool consume(std::string_view token) {
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!consume(token)) fail("expected '" + std::string(token) + "'");
    }

    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    int integer() {
        int v = 0;
        const char* first = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
        if (ec != std::errc{}) fail("expected an integer");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    double real() {
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
        if (ec != std::errc{}) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    std::vector<double> real_list() {
        std::vector<double> v{real()};
        while (consume(",")) v.push_back(real());
        return v;
    }

    // Factory errors are reported at the start of the offending term.
    template <class F>
    Body build(std::size_t start, F&& make) {
        try {
            return make();
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(start, e.what());
        }
    }

    Body body() {
        const std::size_t start = pos_;
        if (consume("point:")) {
            const int n = integer();
            return build(start, [&] { return make_point(n); });
        }
        if (consume("ball:")) {
            const int n = integer();
            expect(",");
            const double r = real();
            return build(start, [&] { return make_ball(n, r); });
        }
        if (consume("box:")) {
            auto lengths = real_list();
            return build(start, [&] { return make_box(std::move(lengths)); });
        }
        if (consume("cube:")) {
            const int n = integer();
            if (consume(",")) {
                const double s = real();
                return build(start, [&] { return make_scaled(s, make_cube(n)); });
            }
            return build(start, [&] { return make_cube(n); });
        }
        if (consume("product(")) {
            Body left = body();
            expect(";");
            Body right = body();
            expect(")");
            return make_product(std::move(left), std::move(right));
        }
        if (consume("scale(")) {
            const double f = real();
            expect(";");
            Body inner = body();
            expect(")");
            return build(start, [&] { return make_scaled(f, std::move(inner)); });
        }
        if (consume("embed(")) {
            Body inner = body();
            expect(";");
            const int m = integer();
            expect(")");
            return build(start, [&] { return make_embedded(std::move(inner), m); });
        }
        if (consume("translate(")) {
            const auto v = real_list();
            expect(";");
            Body inner = body();
            expect(")");
            return build(start, [&] {
                return make_translated(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())),
                                       std::move(inner));
            });
        }
        fail("expected one of point:, ball:, box:, cube:, product(, scale(, embed(, translate(");
    }
};

std::string fmt_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

Body parse_body(std::string_view text) { return Parser(text).parse(); }

std::string format_body(const Body& body) {
    using detail::overloaded;
    return std::visit(
        overloaded{
            [](const shape::Point& p) { return "point:" + std::to_string(p.dim); },
            [](const shape::Ball& p) { return "ball:" + std::to_string(p.dim) + "," + fmt_real(p.radius); },
            [](const shape::Box& p) {
                std::string s = "box:";
                for (std::size_t i = 0; i < p.lengths.size(); ++i) s += (i ? "," : "") + fmt_real(p.lengths[i]);
                return s;
            },
            [](const shape::Product& p) {
                return "product(" + format_body(p.left) + ";" + format_body(p.right) + ")";
            },
            [](const shape::Scaled& p) { return "scale(" + fmt_real(p.factor) + ";" + format_body(p.inner) + ")"; },
            [](const shape::Translated& p) {
                std::string s = "translate(";
                for (Eigen::Index i = 0; i < p.offset.size(); ++i) s += (i ? "," : "") + fmt_real(p.offset[i]);
                return s + ";" + format_body(p.inner) + ")";
            },
            [](const shape::Embedded& p) {
                return "embed(" + format_body(p.inner) + ";" + std::to_string(p.extra_dims) + ")";
            },
        },
        body.node().shape);
}

}  // namespace ivlab
