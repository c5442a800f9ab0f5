#include "hpt/stream_io.hpp"

#include "hpt/errors.hpp"
#include "hpt/text.hpp"

#include <fstream>
#include <map>

namespace hpt {

using nlohmann::json;

StreamFormat parse_stream_format(std::string_view text) {
  if (text == "jsonl") return StreamFormat::Jsonl;
  if (text == "csv") return StreamFormat::Csv;
  throw ValueError("unknown stream format '" + std::string(text) + "' (expected jsonl or csv)");
}

StreamFormat format_for_path(const std::string& path, std::string_view requested) {
  if (requested != "auto" && !requested.empty()) return parse_stream_format(requested);
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? StreamFormat::Csv : StreamFormat::Jsonl;
}

namespace {

double number_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"", 0);
  if (!it->is_number()) throw ParseError(std::string("field \"") + key + "\" is not a number", 0);
  return it->get<double>();
}

FrameRecord normalized(FrameRecord f) {
  require_finite(f.pose, "pose");
  f.pose = normalize(f.pose);
  if (f.ground_truth) {
    require_finite(*f.ground_truth, "ground truth");
    f.ground_truth = normalize(*f.ground_truth);
  }
  return f;
}

class Ingest {
 public:
  explicit Ingest(StreamReadResult& out) : out_(out) {}

  void add(FrameRecord f, std::size_t line) {
    if (!std::isfinite(f.t)) throw ParseError("timestamp is not finite", line);
    if (last_t_) {
      if (f.t == *last_t_) {
        out_.warnings.push_back("line " + std::to_string(line) + ": duplicate timestamp " + format_double(f.t) +
                                " dropped");
        return;
      }
      if (f.t < *last_t_) {
        out_.rejected.push_back({line, f.t, "timestamp " + format_double(f.t) + " precedes " + format_double(*last_t_)});
        return;
      }
    }
    last_t_ = f.t;
    out_.frames.push_back(std::move(f));
  }

 private:
  StreamReadResult& out_;
  std::optional<double> last_t_;
};

void read_jsonl(std::istream& in, StreamReadResult& out, const ReadOptions& opt) {
  Ingest ingest(out);
  std::string line;
  std::size_t lineno = 0;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object()) throw ParseError("frame is not a JSON object", lineno);
    FrameRecord f;
    try {
      std::optional<double> implicit;
      if (opt.implicit_dt) implicit = static_cast<double>(index) * *opt.implicit_dt;
      f = normalized(frame_from_json(j, implicit));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    } catch (const ValueError& e) {
      throw ParseError(e.what(), lineno);
    }
    ++index;
    ingest.add(std::move(f), lineno);
  }
}

void read_csv(std::istream& in, StreamReadResult& out, const ReadOptions& opt) {
  Ingest ingest(out);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> columns;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) return;
  const auto header = split(line, ',');
  for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
  for (const char* need : {"pitch", "yaw", "roll"})
    if (!columns.count(need)) throw ParseError(std::string("CSV header lacks column '") + need + "'", lineno);
  const bool has_t = columns.count("t") > 0;
  if (!has_t && !opt.implicit_dt) throw ParseError("CSV header lacks column 't'", lineno);
  const bool has_gt = columns.count("gt_pitch") && columns.count("gt_yaw") && columns.count("gt_roll");

  std::size_t index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()),
                       lineno);
    auto cell = [&](const char* name) {
      try {
        return parse_double(cells[columns.at(name)], name);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    };
    FrameRecord f;
    f.t = has_t ? cell("t") : static_cast<double>(index) * *opt.implicit_dt;
    f.pose = {cell("pitch"), cell("yaw"), cell("roll")};
    if (has_gt) f.ground_truth = EulerPose{cell("gt_pitch"), cell("gt_yaw"), cell("gt_roll")};
    try {
      f = normalized(std::move(f));
    } catch (const ValueError& e) {
      throw ParseError(e.what(), lineno);
    }
    ++index;
    ingest.add(std::move(f), lineno);
  }
}

}  // namespace

FrameRecord frame_from_json(const json& j, std::optional<double> implicit_t) {
  FrameRecord f;
  if (!j.contains("t") && implicit_t)
    f.t = *implicit_t;
  else
    f.t = number_field(j, "t");
  f.pose = {number_field(j, "pitch"), number_field(j, "yaw"), number_field(j, "roll")};
  if (j.contains("gt_pitch") || j.contains("gt_yaw") || j.contains("gt_roll"))
    f.ground_truth = EulerPose{number_field(j, "gt_pitch"), number_field(j, "gt_yaw"), number_field(j, "gt_roll")};
  return f;
}

json record_to_json(const OutputRecord& r) {
  json j;
  j["t"] = r.t;
  j["pitch"] = r.pose.pitch;
  j["yaw"] = r.pose.yaw;
  j["roll"] = r.pose.roll;
  if (r.velocity) {
    j["vp"] = (*r.velocity)[0];
    j["vy"] = (*r.velocity)[1];
    j["vr"] = (*r.velocity)[2];
  }
  if (r.ground_truth) {
    j["gt_pitch"] = r.ground_truth->pitch;
    j["gt_yaw"] = r.ground_truth->yaw;
    j["gt_roll"] = r.ground_truth->roll;
  }
  return j;
}

StreamReadResult read_stream(std::istream& in, StreamFormat format, const ReadOptions& opt) {
  StreamReadResult out;
  if (format == StreamFormat::Jsonl)
    read_jsonl(in, out, opt);
  else
    read_csv(in, out, opt);
  if (out.frames.empty() && out.rejected.empty()) out.warnings.emplace_back("stream is empty");
  return out;
}

StreamReadResult read_stream(const std::string& path, StreamFormat format, const ReadOptions& opt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input stream '" + path + "'");
  return read_stream(in, format, opt);
}

void write_stream(std::ostream& out, std::span<const OutputRecord> records, StreamFormat format) {
  if (format == StreamFormat::Jsonl) {
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    return;
  }
  const bool gt = !records.empty() && std::all_of(records.begin(), records.end(),
                                                  [](const OutputRecord& r) { return r.ground_truth.has_value(); });
  out << "t,pitch,yaw,roll" << (gt ? ",gt_pitch,gt_yaw,gt_roll" : "") << '\n';
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.pose.pitch) << ',' << format_double(r.pose.yaw) << ','
        << format_double(r.pose.roll);
    if (gt)
      out << ',' << format_double(r.ground_truth->pitch) << ',' << format_double(r.ground_truth->yaw) << ','
          << format_double(r.ground_truth->roll);
    out << '\n';
  }
}

void write_stream(const std::string& path, std::span<const OutputRecord> records, StreamFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write output stream '" + path + "'");
  write_stream(out, records, format);
}

void write_frames(const std::string& path, std::span<const FrameRecord> frames, StreamFormat format) {
  std::vector<OutputRecord> recs;
  recs.reserve(frames.size());
  for (const auto& f : frames) recs.push_back({f.t, f.pose, std::nullopt, f.ground_truth});
  write_stream(path, recs, format);
}

}  // namespace hpt
