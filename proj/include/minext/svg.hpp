#pragma once

#include <sstream>
#include <string>

namespace minext::svg {

// Minimal self-contained SVG 1.1 document builder; enough for stem plots,
// heatmaps and line charts.
class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none");
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0);
    void circle(double cx, double cy, double r, const std::string& stroke,
                const std::string& fill = "none");
    void cross(double cx, double cy, double size, const std::string& stroke);
    void text(double x, double y, const std::string& content, double size = 12.0,
              const std::string& anchor = "start");
    void polyline(const std::string& points, const std::string& stroke, double width = 1.0);

    std::string str() const;

private:
    double width_;
    double height_;
    std::ostringstream body_;
};

// Gray level for a heat cell: rate 1 -> white, rate 0 -> black.
std::string gray(double rate);

}  // namespace minext::svg
