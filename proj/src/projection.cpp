#include "softfinger/projection.hpp"

#include "softfinger/io_util.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <sstream>

namespace softfinger {

Vec3 pixel_to_world(const PixelObservation& obs, const ProjectionCoefficients& c) {
    if (!(obs.area_px > 0.0)) {
        throw std::invalid_argument("pixel observation must have positive area");
    }
    const double r_px = obs.r_px();
    const double h_px = obs.h_px();
    const double r_mm = c.c0 * r_px + c.c1 * r_px * h_px;
    const double z_mm = c.c2 * r_px + c.c3 * h_px + c.c4 * h_px * h_px + c.c5;
    if (r_px > 0.0) {
        return {r_mm * obs.x_px / r_px, r_mm * obs.y_px / r_px, z_mm};
    }
    return {0.0, 0.0, z_mm};
}

std::vector<Vec3> generate_calibration_mesh() {
    constexpr std::array<double, 3> depth = {55.0, 105.0, 155.0};
    constexpr std::array<double, 3> width = {100.0, 150.0, 250.0};
    constexpr std::array<double, 3> height = {40.0, 80.0, 120.0};

    std::vector<Vec3> points;
    points.reserve(27);
    for (std::size_t k = 0; k < 3; ++k) {
        for (int iy = -1; iy <= 1; ++iy) {
            for (int ix = -1; ix <= 1; ++ix) {
                points.emplace_back(ix * width[k] / 2.0, iy * height[k] / 2.0, depth[k]);
            }
        }
    }
    return points;
}

namespace {

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design,
                                    const Eigen::VectorXd& target,
                                    const char* which) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) {
        throw SingularCalibrationError(std::string("rank-deficient ") + which +
                                       " design matrix (rank " + std::to_string(qr.rank()) +
                                       " of " + std::to_string(design.cols()) + ")");
    }
    return qr.solve(target);
}

}  // namespace

ProjectionCoefficients fit_coefficients(std::span<const CalibrationPoint> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n < 4) {
        throw SingularCalibrationError("need at least 4 calibration points, have " +
                                       std::to_string(points.size()));
    }

    Eigen::MatrixXd radial(n, 2);
    Eigen::VectorXd radial_target(n);
    Eigen::MatrixXd depth(n, 4);
    Eigen::VectorXd depth_target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const PixelObservation& obs = points[static_cast<std::size_t>(i)].observation;
        if (!(obs.area_px > 0.0)) {
            throw std::invalid_argument("calibration point " + std::to_string(i) +
                                        " has non-positive area");
        }
        const Vec3& world = points[static_cast<std::size_t>(i)].world;
        const double r = obs.r_px();
        const double h = obs.h_px();
        radial(i, 0) = r;
        radial(i, 1) = r * h;
        radial_target(i) = std::hypot(world.x(), world.y());
        depth(i, 0) = r;
        depth(i, 1) = h;
        depth(i, 2) = h * h;
        depth(i, 3) = 1.0;
        depth_target(i) = world.z();
    }

    const Eigen::VectorXd rc = solve_least_squares(radial, radial_target, "radial");
    const Eigen::VectorXd zc = solve_least_squares(depth, depth_target, "z");
    return {rc(0), rc(1), zc(0), zc(1), zc(2), zc(3)};
}

namespace {

constexpr const char* kCalibrationHeader = "x_px,y_px,area_px,x_mm,y_mm,z_mm";

}  // namespace

std::vector<CalibrationPoint> read_calibration_csv(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) {
        throw CsvFormatError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCalibrationHeader) {
        throw CsvFormatError(path.string() + ": expected header '" + kCalibrationHeader + "'");
    }
    std::vector<CalibrationPoint> points;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw CsvFormatError(path.string() + ":" + std::to_string(line_no) +
                                 ": expected 6 fields");
        }
        CalibrationPoint p;
        try {
            p.observation.x_px = parse_double(fields[0], "x_px");
            p.observation.y_px = parse_double(fields[1], "y_px");
            p.observation.area_px = parse_double(fields[2], "area_px");
            p.world.x() = parse_double(fields[3], "x_mm");
            p.world.y() = parse_double(fields[4], "y_mm");
            p.world.z() = parse_double(fields[5], "z_mm");
        } catch (const std::invalid_argument& e) {
            throw CsvFormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        points.push_back(p);
    }
    return points;
}

void write_calibration_csv(std::span<const CalibrationPoint> points,
                           const std::filesystem::path& path) {
    std::string out = kCalibrationHeader;
    out += '\n';
    for (const CalibrationPoint& p : points) {
        out += format_double(p.observation.x_px);
        for (double v : {p.observation.y_px, p.observation.area_px,
                         p.world.x(), p.world.y(), p.world.z()}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

ProjectionCoefficients read_coefficients_json(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw CsvFormatError(path.string() + ": " + e.what());
    }
    ProjectionCoefficients c;
    double* slots[6] = {&c.c0, &c.c1, &c.c2, &c.c3, &c.c4, &c.c5};
    for (int i = 0; i < 6; ++i) {
        const std::string key = "c" + std::to_string(i);
        if (!doc.contains(key) || !doc[key].is_number()) {
            throw CsvFormatError(path.string() + ": missing numeric key '" + key + "'");
        }
        *slots[i] = doc[key].get<double>();
    }
    return c;
}

void write_coefficients_json(const ProjectionCoefficients& c,
                             const std::filesystem::path& path) {
    nlohmann::json doc{{"c0", c.c0}, {"c1", c.c1}, {"c2", c.c2},
                       {"c3", c.c3}, {"c4", c.c4}, {"c5", c.c5}};
    write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace softfinger
