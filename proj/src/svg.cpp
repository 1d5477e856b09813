#include "minext/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace minext::svg {

Document::Document(double width, double height) : width_(width), height_(height) {
    body_ << std::setprecision(6);
}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    const std::string& stroke) {
    body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double width) {
    body_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& stroke,
                      const std::string& fill) {
    body_ << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" stroke=\"" << stroke
          << "\" fill=\"" << fill << "\"/>\n";
}

void Document::cross(double cx, double cy, double size, const std::string& stroke) {
    line(cx - size, cy - size, cx + size, cy + size, stroke);
    line(cx - size, cy + size, cx + size, cy - size, stroke);
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& anchor) {
    body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
          << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << content
          << "</text>\n";
}

void Document::polyline(const std::string& points, const std::string& stroke, double width) {
    body_ << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"" << width << "\"/>\n";
}

std::string Document::str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_
        << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
}

std::string gray(double rate) {
    const int level = static_cast<int>(std::lround(255.0 * std::clamp(rate, 0.0, 1.0)));
    std::ostringstream os;
    os << "rgb(" << level << "," << level << "," << level << ")";
    return os.str();
}

}  // namespace minext::svg
