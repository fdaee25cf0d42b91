#include "levline/record.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace levline {

using nlohmann::json;

namespace {

json params_to_json(const DetectorParams& p) {
    return json{{"grad_thresh", p.grad_thresh},
                {"equalize_radius", p.equalize_radius},
                {"endpoint_thresh", p.endpoint_thresh},
                {"inlier_ratio", p.inlier_ratio},
                {"dist_thresh", p.dist_thresh},
                {"angle_thresh", p.angle_thresh},
                {"rho", p.rho},
                {"min_length", p.min_length},
                {"init_window", p.init_window},
                {"max_consecutive_rejects", p.max_consecutive_rejects},
                {"init_refine", p.init_refine},
                {"angle_validation", p.angle_validation}};
}

DetectorParams params_from_json(const json& j) {
    DetectorParams p;
    p.grad_thresh = j.at("grad_thresh").get<double>();
    p.equalize_radius = j.at("equalize_radius").get<double>();
    p.endpoint_thresh = j.at("endpoint_thresh").get<double>();
    p.inlier_ratio = j.at("inlier_ratio").get<double>();
    p.dist_thresh = j.at("dist_thresh").get<double>();
    p.angle_thresh = j.at("angle_thresh").get<double>();
    p.rho = j.at("rho").get<double>();
    p.min_length = j.at("min_length").get<double>();
    p.init_window = j.at("init_window").get<int>();
    p.max_consecutive_rejects = j.at("max_consecutive_rejects").get<int>();
    p.init_refine = j.at("init_refine").get<bool>();
    p.angle_validation = j.at("angle_validation").get<bool>();
    return p;
}

} // namespace

std::string record_to_json(const DetectionRecord& rec) {
    json segs = json::array();
    for (const LineSegment& s : rec.segments) {
        segs.push_back(json{{"x1", s.p1.x},
                            {"y1", s.p1.y},
                            {"x2", s.p2.x},
                            {"y2", s.p2.y},
                            {"a", s.line.a},
                            {"b", s.line.b},
                            {"c", s.line.c},
                            {"support", s.support},
                            {"mean_dist", s.mean_dist},
                            {"mean_angle", s.mean_angle}});
    }
    json j{{"image", rec.image},
           {"width", rec.width},
           {"height", rec.height},
           {"params", params_to_json(rec.params)},
           {"segments", segs}};
    return j.dump(2) + "\n";
}

DetectionRecord record_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("record: ") + e.what());
    }
    try {
        DetectionRecord rec;
        rec.image = j.at("image").get<std::string>();
        rec.width = j.at("width").get<int>();
        rec.height = j.at("height").get<int>();
        rec.params = params_from_json(j.at("params"));
        for (const json& s : j.at("segments")) {
            LineSegment seg;
            seg.p1 = Vec2{s.at("x1").get<double>(), s.at("y1").get<double>()};
            seg.p2 = Vec2{s.at("x2").get<double>(), s.at("y2").get<double>()};
            seg.line = LineParams{s.at("a").get<double>(), s.at("b").get<double>(),
                                  s.at("c").get<double>()};
            seg.support = s.at("support").get<int>();
            seg.mean_dist = s.at("mean_dist").get<double>();
            seg.mean_angle = s.at("mean_angle").get<double>();
            rec.segments.push_back(seg);
        }
        return rec;
    } catch (const json::exception& e) {
        throw FormatError(std::string("record: ") + e.what());
    }
}

void save_record(const DetectionRecord& rec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << record_to_json(rec);
    if (!out) throw IoError(path + ": write failed");
}

DetectionRecord load_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return record_from_json(buf.str());
}

} // namespace levline
