#include "mot/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace mot {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& field, int line_no) {
    const char* s = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    // Trailing whitespace (e.g. a stray CR) is tolerated; anything else is not.
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || (end && *end != '\0') || errno == ERANGE)
        throw ParseError(line_no, "non-numeric field '" + field + "'");
    return v;
}

struct Row {
    int frame;
    int id;
    BBox box;
    double conf;
};

Row parse_row(const std::string& line, int line_no) {
    const auto fields = split(line, ',');
    if (fields.size() != 10)
        throw ParseError(line_no, "expected 10 comma-separated fields, got " +
                                      std::to_string(fields.size()));
    double v[10];
    for (int i = 0; i < 10; ++i) v[i] = parse_number(fields[static_cast<std::size_t>(i)], line_no);

    const double frame = v[0];
    if (frame < 1.0 || frame != static_cast<double>(static_cast<int>(frame)))
        throw ParseError(line_no, "frame must be an integer >= 1");
    if (!(v[4] > 0.0) || !(v[5] > 0.0))
        throw ParseError(line_no, "box width and height must be positive");

    Row r;
    r.frame = static_cast<int>(frame);
    r.id = static_cast<int>(v[1]);
    r.box = BBox(v[2], v[3], v[4], v[5]);
    r.conf = v[6];
    return r;
}

void append_row(std::string& out, int frame, int id, const BBox& b, double conf) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.6f,-1,-1,-1\n", frame, id, b.left,
                  b.top, b.width, b.height, conf);
    out += buf;
}

}  // namespace

std::vector<Detection> parse_detections(const std::string& text) {
    std::vector<Detection> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const Row r = parse_row(line, line_no);
        out.emplace_back(r.frame, r.box, r.conf);
    }
    return out;
}

std::vector<Trajectory> parse_tracks(const std::string& text) {
    std::map<int, Trajectory> by_id;
    std::set<std::pair<int, int>> seen;  // (frame, id)
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const Row r = parse_row(line, line_no);
        if (r.id < 1) throw ParseError(line_no, "track id must be >= 1");
        if (!seen.insert({r.frame, r.id}).second)
            throw ParseError(line_no, "duplicate (frame " + std::to_string(r.frame) + ", id " +
                                          std::to_string(r.id) + ") pair");
        Trajectory& t = by_id[r.id];
        t.id = r.id;
        t.boxes[r.frame] = r.box;
    }
    std::vector<Trajectory> out;
    out.reserve(by_id.size());
    for (auto& [id, t] : by_id) out.push_back(std::move(t));
    return out;
}

std::string serialize_detections(const std::vector<Detection>& dets) {
    std::string out;
    for (const Detection& d : dets) append_row(out, d.frame, -1, d.box, d.confidence);
    return out;
}

std::string serialize_tracks(const std::vector<Trajectory>& tracks) {
    // Rows sorted by (frame, id); confidence column fixed at 1.
    std::vector<std::tuple<int, int, const BBox*>> rows;
    for (const Trajectory& t : tracks)
        for (const auto& [frame, box] : t.boxes) rows.emplace_back(frame, t.id, &box);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::string out;
    for (const auto& [frame, id, box] : rows) append_row(out, frame, id, *box, 1.0);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return out;
}

std::string serialize_seqinfo(const Sequence& seq) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "name=%s\nframe_count=%d\nframe_rate=%.2f\nwidth=%.0f\nheight=%.0f\n",
                  seq.name.c_str(), seq.frame_count, seq.frame_rate, seq.image_width,
                  seq.image_height);
    return buf;
}

Sequence parse_seqinfo(const std::string& text) {
    Sequence seq;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "name")
            seq.name = value;
        else if (key == "frame_count")
            seq.frame_count = std::max(1, atoi(value.c_str()));
        else if (key == "frame_rate")
            seq.frame_rate = atof(value.c_str());
        else if (key == "width")
            seq.image_width = atof(value.c_str());
        else if (key == "height")
            seq.image_height = atof(value.c_str());
        else
            throw std::runtime_error("seqinfo: unknown key " + key);
    }
    if (seq.frame_rate <= 0.0) throw std::runtime_error("seqinfo: frame_rate must be > 0");
    return seq;
}

}  // namespace mot
