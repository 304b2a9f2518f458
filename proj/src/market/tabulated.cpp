#include "invmerton/market/tabulated.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "invmerton/error.hpp"
#include "invmerton/io/csv.hpp"

namespace invmerton {
namespace {

void check_knots(const std::vector<double>& k, const char* axis) {
    if (k.size() < 2) fail(ErrorKind::InvalidArgument, std::string("tabulated: need >= 2 ") + axis + " knots");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!std::isfinite(k[i])) fail(ErrorKind::InvalidArgument, std::string("tabulated: non-finite ") + axis + " knot");
        if (i > 0 && !(k[i] > k[i - 1])) {
            fail(ErrorKind::InvalidArgument, std::string("tabulated: ") + axis + " knots must be strictly increasing");
        }
    }
}

// Interval index and weight of x in knots (clamped to the hull).
std::pair<std::size_t, double> locate(const std::vector<double>& knots, double x) {
    if (x <= knots.front()) return {0, 0.0};
    if (x >= knots.back()) return {knots.size() - 2, 1.0};
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - knots.begin()) - 1;
    return {j, (x - knots[j]) / (knots[j + 1] - knots[j])};
}

class Tabulated final : public SurfaceModel {
public:
    Tabulated(TabulatedData data, std::string name) : data_(std::move(data)), name_(std::move(name)) {
        data_.validate();
    }

    double value(double t, double w) const override {
        if (t < data_.t.front() || t > data_.t.back()) {
            fail(ErrorKind::OutOfDomain, name_ + ": t=" + std::to_string(t) + " outside the knot range");
        }
        const auto [i, a] = locate(data_.t, t);
        const auto [j, b] = locate(data_.w, w);
        const double v00 = data_.at(i, j), v01 = data_.at(i, j + 1);
        const double v10 = data_.at(i + 1, j), v11 = data_.at(i + 1, j + 1);
        const double lo = (1.0 - b) * v00 + b * v01;
        const double hi = (1.0 - b) * v10 + b * v11;
        return (1.0 - a) * lo + a * hi;
    }

    std::string name() const override { return name_; }
    FdDomain domain() const override { return {data_.t.front(), data_.t.back(), 0.0}; }

private:
    TabulatedData data_;
    std::string name_;
};

double parse_number(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        fail(ErrorKind::Config, "tabulated csv line " + std::to_string(line) + ": bad number '" +
                                    std::string(field) + "'");
    }
    return v;
}

}  // namespace

void TabulatedData::validate() const {
    check_knots(t, "t");
    check_knots(w, "w");
    if (values.size() != t.size() * w.size()) fail(ErrorKind::InvalidArgument, "tabulated: value count mismatch");
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "tabulated: non-finite value");
    }
}

StrategySurface make_tabulated(TabulatedData data, std::string name) {
    return StrategySurface(std::make_shared<Tabulated>(std::move(data), std::move(name)));
}

TabulatedData sample_surface(const StrategySurface& surface, std::vector<double> t_knots,
                             std::vector<double> w_knots) {
    TabulatedData d{std::move(t_knots), std::move(w_knots), {}};
    d.values.reserve(d.t.size() * d.w.size());
    for (double t : d.t) {
        for (double w : d.w) d.values.push_back(surface.value(t, w));
    }
    d.validate();
    return d;
}

TabulatedData read_tabulated_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open tabulated csv " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Config, "tabulated csv is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line != "t,w,value") fail(ErrorKind::Config, "tabulated csv header must be 't,w,value'");

    std::map<std::pair<double, double>, double> cells;
    std::set<double> ts, ws;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) fail(ErrorKind::Config, "tabulated csv line " + std::to_string(line_no) + ": need 3 fields");
        const double t = parse_number(fields[0], line_no);
        const double w = parse_number(fields[1], line_no);
        const double v = parse_number(fields[2], line_no);
        if (!cells.emplace(std::make_pair(t, w), v).second) {
            fail(ErrorKind::Config, "tabulated csv line " + std::to_string(line_no) + ": duplicate knot");
        }
        ts.insert(t);
        ws.insert(w);
    }
    TabulatedData d{{ts.begin(), ts.end()}, {ws.begin(), ws.end()}, {}};
    if (cells.size() != d.t.size() * d.w.size()) fail(ErrorKind::Config, "tabulated csv does not cover a full t x w grid");
    d.values.reserve(cells.size());
    for (const auto& [key, v] : cells) d.values.push_back(v);  // map order is (t, w) lexicographic
    try {
        d.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, e.what());
    }
    return d;
}

void write_tabulated_csv(const TabulatedData& data, const std::filesystem::path& path) {
    CsvWriter out(path, {"t", "w", "value"});
    for (std::size_t i = 0; i < data.t.size(); ++i) {
        for (std::size_t j = 0; j < data.w.size(); ++j) out.row({data.t[i], data.w[j], data.at(i, j)});
    }
}

}  // namespace invmerton
