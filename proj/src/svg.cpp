#include "svg.hpp"

#include <cmath>
#include <cstdio>

namespace idprof::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 55;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, double step) {
    char buf[32];
    const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

Ticks nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
    return Ticks{std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

Plot::Plot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void Plot::set_x_range(double lo, double hi) {
    x_lo_ = lo;
    x_hi_ = hi > lo ? hi : lo + 1.0;
}

void Plot::set_y_range(double lo, double hi) {
    y_lo_ = lo;
    y_hi_ = hi > lo ? hi : lo + 1.0;
}

double Plot::px(double x) const { return kLeft + (x - x_lo_) / (x_hi_ - x_lo_) * (kWidth - kLeft - kRight); }

double Plot::py(double y) const { return kHeight - kBottom - (y - y_lo_) / (y_hi_ - y_lo_) * (kHeight - kTop - kBottom); }

void Plot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& colour) {
    if (pts.empty()) return;
    std::string s = "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += num(px(pts[i].first)) + "," + num(py(pts[i].second));
    }
    body_.push_back(s + "\"/>");
}

void Plot::marker(double x, double y, const std::string& colour, double radius) {
    body_.push_back("<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(radius) +
                    "\" fill=\"" + colour + "\"/>");
}

void Plot::error_bar(double x, double y, double x_err, double y_err, const std::string& colour) {
    if (y_err > 0) line(x, y - y_err, x, y + y_err, colour, false);
    if (x_err > 0) line(x - x_err, y, x + x_err, y, colour, false);
}

void Plot::line(double x0, double y0, double x1, double y1, const std::string& colour, bool dashed) {
    body_.push_back("<line x1=\"" + num(px(x0)) + "\" y1=\"" + num(py(y0)) + "\" x2=\"" + num(px(x1)) + "\" y2=\"" +
                    num(py(y1)) + "\" stroke=\"" + colour + "\" stroke-width=\"1\"" +
                    (dashed ? " stroke-dasharray=\"5,4\"" : "") + "/>");
}

void Plot::label(double x, double y, const std::string& text) {
    body_.push_back("<text x=\"" + num(px(x) + 5) + "\" y=\"" + num(py(y) - 5) + "\" font-size=\"10\">" +
                    escape(text) + "</text>");
}

void Plot::note(const std::string& text) { notes_.push_back(text); }

std::string Plot::render() const {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title_) +
         "</text>\n";

    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) +
         "\" stroke=\"black\"/>\n";

    const Ticks xt = nice_ticks(x_lo_, x_hi_);
    for (double v = xt.lo; v <= x_hi_ + 1e-9 * xt.step; v += xt.step) {
        if (v < x_lo_ - 1e-9 * xt.step) continue;
        s += "<line x1=\"" + num(px(v)) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px(v)) + "\" y2=\"" + num(y0 + 5) +
             "\" stroke=\"black\"/>";
        s += "<text x=\"" + num(px(v)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\" font-size=\"10\">" +
             tick_label(v, xt.step) + "</text>\n";
    }
    const Ticks yt = nice_ticks(y_lo_, y_hi_);
    for (double v = yt.lo; v <= y_hi_ + 1e-9 * yt.step; v += yt.step) {
        if (v < y_lo_ - 1e-9 * yt.step) continue;
        s += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py(v)) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(py(v)) +
             "\" stroke=\"black\"/>";
        s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py(v) + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
             tick_label(v, yt.step) + "</text>\n";
    }
    s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape(x_label_) + "</text>\n";
    s += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " +
         num((y0 + y1) / 2) + ")\">" + escape(y_label_) + "</text>\n";

    for (const auto& element : body_) s += element + "\n";
    for (std::size_t i = 0; i < notes_.size(); ++i) {
        s += "<text x=\"" + num(x0 + 10) + "\" y=\"" + num(y1 + 14 + 14 * static_cast<double>(i)) +
             "\" font-size=\"11\">" + escape(notes_[i]) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace idprof::svg
