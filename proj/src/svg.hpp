#pragma once

#include <string>
#include <utility>
#include <vector>

namespace idprof::svg {

/// Minimal fixed-size 2-D chart writer: axes with ticks, polylines, markers,
/// error bars and labels. Output depends only on the calls made.
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label);

    void set_x_range(double lo, double hi);
    void set_y_range(double lo, double hi);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& colour);
    void marker(double x, double y, const std::string& colour, double radius = 3.5);
    /// Symmetric bars; pass 0 to omit a direction.
    void error_bar(double x, double y, double x_err, double y_err, const std::string& colour);
    void line(double x0, double y0, double x1, double y1, const std::string& colour, bool dashed);
    void label(double x, double y, const std::string& text);
    /// Text line stacked in the top-left corner of the plotting area.
    void note(const std::string& text);

    std::string render() const;

private:
    double px(double x) const;
    double py(double y) const;

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    double x_lo_ = 0.0, x_hi_ = 1.0, y_lo_ = 0.0, y_hi_ = 1.0;
    std::vector<std::string> body_;
    std::vector<std::string> notes_;
};

/// Rounds the range outward to "nice" tick steps; returns {lo, hi, step}.
struct Ticks {
    double lo;
    double hi;
    double step;
};
Ticks nice_ticks(double lo, double hi, int target = 5);

std::string escape(const std::string& text);

}  // namespace idprof::svg
