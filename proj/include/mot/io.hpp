#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mot/types.hpp"

namespace mot {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// 10-column CSV exchange format, one row per box:
//   frame,id,left,top,width,height,conf,x,y,z
// LF newlines, no header; unused trailing fields carry -1 sentinels.

std::vector<Detection> parse_detections(const std::string& text);
std::vector<Trajectory> parse_tracks(const std::string& text);

std::string serialize_detections(const std::vector<Detection>& dets);
std::string serialize_tracks(const std::vector<Trajectory>& tracks);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// seqinfo: key=value lines (name, frame_count, frame_rate, width, height).
std::string serialize_seqinfo(const Sequence& seq);
Sequence parse_seqinfo(const std::string& text);

// Generic key=value parsing shared by config-file readers.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

}  // namespace mot
