#include "reebsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace reebsim {

namespace {

using nlohmann::json;

constexpr const char* kDatasetMagic = "#reebsim-dataset v1";
constexpr const char* kColumnHeader = "agent_id,day,index,lat,lon";

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

bool parse_double(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_int(std::string_view s, long long& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

class ErrorCollector {
public:
    void add(int line, const std::string& message) {
        if (messages_.size() < 20) {
            std::ostringstream out;
            out << "line " << line << ": " << message;
            messages_.push_back(out.str());
        }
        ++count_;
    }

    void raise_if_any() const {
        if (count_ == 0) return;
        std::ostringstream out;
        out << count_ << " problem(s) while parsing dataset:";
        for (const auto& m : messages_) out << "\n  " << m;
        if (count_ > messages_.size()) out << "\n  ...";
        raise(ErrorCode::Parse, out.str());
    }

private:
    std::vector<std::string> messages_;
    std::size_t count_ = 0;
};

} // namespace

PopulationDataset parse_dataset(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        ++line_no;
        return static_cast<bool>(std::getline(in, line));
    };
    // strip a trailing CR so CRLF files parse too
    auto chomp = [&]() {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    if (!next_line()) raise(ErrorCode::Parse, "empty dataset file");
    chomp();
    if (line != kDatasetMagic)
        raise(ErrorCode::Parse, "line 1: expected '" + std::string(kDatasetMagic) + "'");

    if (!next_line()) raise(ErrorCode::Parse, "missing dataset header line");
    chomp();
    long long declared_L = -1;
    double interval_minutes = 5.0;
    {
        if (line.empty() || line[0] != '#')
            raise(ErrorCode::Parse, "line 2: expected '#L=... interval_minutes=... coords=...'");
        std::istringstream fields(line.substr(1));
        std::string field;
        bool saw_length = false;
        while (fields >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos)
                raise(ErrorCode::Parse, "line 2: malformed header field '" + field + "'");
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            if (key == "L") {
                if (!parse_int(value, declared_L) || declared_L < 1)
                    raise(ErrorCode::Parse, "line 2: invalid L");
                saw_length = true;
            } else if (key == "interval_minutes") {
                if (!parse_double(value, interval_minutes) || interval_minutes <= 0.0)
                    raise(ErrorCode::Parse, "line 2: invalid interval_minutes");
            } else if (key == "coords") {
                if (value != "latlon-degrees")
                    raise(ErrorCode::Parse, "line 2: unsupported coordinate convention");
            } else {
                raise(ErrorCode::Parse, "line 2: unknown header field '" + key + "'");
            }
        }
        if (!saw_length) raise(ErrorCode::Parse, "line 2: missing L");
    }

    if (!next_line()) raise(ErrorCode::Parse, "missing column header");
    chomp();
    if (line != kColumnHeader)
        raise(ErrorCode::Parse, "line 3: expected '" + std::string(kColumnHeader) + "'");

    const int L = static_cast<int>(declared_L);
    ErrorCollector errors;
    // (agent, day) -> dense point slots with fill marks
    std::map<std::pair<std::string, int>, std::vector<std::pair<bool, Point>>> rows;
    while (next_line()) {
        chomp();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 5) {
            errors.add(line_no, "expected 5 fields");
            continue;
        }
        const std::string agent_id(fields[0]);
        long long day = 0, index = 0;
        double lat = 0.0, lon = 0.0;
        if (agent_id.empty() || agent_id[0] == '#') {
            errors.add(line_no, "invalid agent id");
            continue;
        }
        if (!parse_int(fields[1], day)) {
            errors.add(line_no, "unparseable day");
            continue;
        }
        if (!parse_int(fields[2], index) || index < 0 || index >= L) {
            errors.add(line_no, "index out of range 0.." + std::to_string(L - 1));
            continue;
        }
        if (!parse_double(fields[3], lat) || !parse_double(fields[4], lon)) {
            errors.add(line_no, "unparseable coordinates");
            continue;
        }
        auto& slots = rows[{agent_id, static_cast<int>(day)}];
        if (slots.empty()) slots.assign(L, {false, Point{}});
        auto& slot = slots[index];
        if (slot.first) {
            std::ostringstream msg;
            msg << "duplicate row for (" << agent_id << ", " << day << ", " << index << ")";
            errors.add(line_no, msg.str());
            continue;
        }
        slot = {true, Point{static_cast<int>(index), lat, lon}};
    }
    errors.raise_if_any();
    if (rows.empty()) raise(ErrorCode::Parse, "dataset file contains no rows");

    PopulationDataset data;
    data.sample_minutes = interval_minutes;
    for (auto& [key, slots] : rows) {
        const auto& [agent_id, day] = key;
        Trajectory traj;
        traj.agent_id = agent_id;
        traj.day = day;
        traj.points.reserve(L);
        for (int i = 0; i < L; ++i) {
            if (!slots[i].first) {
                std::ostringstream msg;
                msg << "trajectory (" << agent_id << ", " << day << ") is missing index "
                    << i << " (ragged length)";
                raise(ErrorCode::Parse, msg.str());
            }
            traj.points.push_back(slots[i].second);
        }
        if (data.agents.empty() || data.agents.back().agent_id != agent_id) {
            data.agents.push_back({agent_id, {}});
        }
        data.agents.back().trajectories.push_back(std::move(traj));
    }

    const ValidationReport report = validate_dataset(data);
    if (!report.ok())
        raise(ErrorCode::Validation, "parsed dataset fails validation:\n" + report.to_string());
    return data;
}

PopulationDataset parse_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open dataset file: " + path);
    return parse_dataset(in);
}

void write_dataset(const PopulationDataset& data, std::ostream& out) {
    if (data.agents.empty()) raise(ErrorCode::UndefinedInput, "refusing to write empty dataset");
    for (const auto& agent : data.agents) {
        if (agent.agent_id.find(',') != std::string::npos ||
            agent.agent_id.find('\n') != std::string::npos || agent.agent_id.empty() ||
            agent.agent_id[0] == '#')
            raise(ErrorCode::Validation, "agent id not representable in CSV: " + agent.agent_id);
    }
    const int L = data.length();
    out << kDatasetMagic << "\n";
    out << "#L=" << L << " interval_minutes=" << format_double(data.sample_minutes)
        << " coords=latlon-degrees\n";
    out << kColumnHeader << "\n";

    // canonical row order: (agent_id, day, index)
    std::vector<const AgentDataset*> agents;
    for (const auto& agent : data.agents) agents.push_back(&agent);
    std::sort(agents.begin(), agents.end(), [](const AgentDataset* a, const AgentDataset* b) {
        return a->agent_id < b->agent_id;
    });
    for (const AgentDataset* agent : agents) {
        std::vector<const Trajectory*> days;
        for (const auto& traj : agent->trajectories) days.push_back(&traj);
        std::sort(days.begin(), days.end(), [](const Trajectory* a, const Trajectory* b) {
            return a->day < b->day;
        });
        for (const Trajectory* traj : days) {
            for (const Point& p : traj->points) {
                out << agent->agent_id << ',' << traj->day << ',' << p.index << ','
                    << format_double(p.lat) << ',' << format_double(p.lon) << '\n';
            }
        }
    }
    if (!out) raise(ErrorCode::Io, "write failure while serializing dataset");
}

void write_dataset_file(const PopulationDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::Io, "cannot open output file: " + path);
    write_dataset(data, out);
    out.flush();
    if (!out) raise(ErrorCode::Io, "write failure: " + path);
}

void save_graph(const ReebGraph& g, const std::string& path) {
    json doc;
    doc["format"] = "reebsim-graph";
    doc["version"] = 1;
    doc["role"] = role_name(g.role);
    doc["length"] = g.length;
    doc["config"] = {{"epsilon", g.provenance.epsilon},
                     {"metric", metric_name(g.provenance.metric)},
                     {"beta", g.provenance.beta}};
    doc["dataset_fingerprint"] = g.provenance.dataset_fingerprint;
    doc["agent_id"] = g.provenance.agent_id;
    doc["traj_ids"] = g.traj_ids;

    json nodes = json::array();
    for (const ReebNode& n : g.nodes)
        nodes.push_back({n.index, n.centroid.lat, n.centroid.lon, n.members});
    doc["nodes"] = std::move(nodes);

    json edges = json::array();
    for (const ReebEdge& e : g.edges) edges.push_back({e.from, e.to, e.weight, e.support});
    doc["edges"] = std::move(edges);

    if (g.role == GraphRole::Hrg) doc["srg_marked"] = g.srg_marked;

    std::ofstream out(path);
    if (!out) raise(ErrorCode::Io, "cannot open output file: " + path);
    out << doc.dump(1) << "\n";
    out.flush();
    if (!out) raise(ErrorCode::Io, "write failure: " + path);
}

ReebGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open graph file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise(ErrorCode::Parse, std::string("invalid graph JSON: ") + e.what());
    }
    try {
        if (doc.at("format") != "reebsim-graph")
            raise(ErrorCode::Parse, "not a reebsim graph file");
        if (doc.at("version") != 1)
            raise(ErrorCode::Parse, "unsupported graph file version");

        ReebGraph g;
        g.role = role_from_name(doc.at("role").get<std::string>());
        g.length = doc.at("length").get<int>();
        if (g.length < 1) raise(ErrorCode::Parse, "invalid graph length");
        g.provenance.epsilon = doc.at("config").at("epsilon").get<double>();
        g.provenance.metric =
            metric_from_name(doc.at("config").at("metric").get<std::string>());
        g.provenance.beta = doc.at("config").at("beta").get<double>();
        g.provenance.dataset_fingerprint =
            doc.at("dataset_fingerprint").get<std::string>();
        g.provenance.agent_id = doc.at("agent_id").get<std::string>();
        g.traj_ids = doc.at("traj_ids").get<std::vector<std::string>>();

        for (const json& jn : doc.at("nodes")) {
            ReebNode n;
            n.id = static_cast<std::uint32_t>(g.nodes.size());
            n.index = jn.at(0).get<int>();
            n.centroid = {jn.at(1).get<double>(), jn.at(2).get<double>()};
            n.members = jn.at(3).get<std::vector<std::uint32_t>>();
            if (n.index < 0 || n.index >= g.length)
                raise(ErrorCode::Parse, "node index out of range");
            if (n.members.empty()) raise(ErrorCode::Parse, "node with empty member set");
            for (std::uint32_t m : n.members)
                if (m >= g.traj_ids.size())
                    raise(ErrorCode::Parse, "node member out of range");
            g.nodes.push_back(std::move(n));
        }
        for (const json& je : doc.at("edges")) {
            ReebEdge e;
            e.from = je.at(0).get<std::uint32_t>();
            e.to = je.at(1).get<std::uint32_t>();
            e.weight = je.at(2).get<double>();
            e.support = je.at(3).get<std::vector<std::uint32_t>>();
            if (e.from >= g.nodes.size() || e.to >= g.nodes.size())
                raise(ErrorCode::Parse, "edge endpoint out of range");
            if (g.nodes[e.to].index <= g.nodes[e.from].index)
                raise(ErrorCode::Parse, "edge does not increase the time index");
            if (!(e.weight > 0.0)) raise(ErrorCode::Parse, "edge with non-positive weight");
            if (e.support.empty()) raise(ErrorCode::Parse, "edge with empty support");
            for (std::uint32_t m : e.support)
                if (m >= g.traj_ids.size())
                    raise(ErrorCode::Parse, "edge support out of range");
            g.edges.push_back(std::move(e));
        }
        if (doc.contains("srg_marked")) {
            g.srg_marked = doc.at("srg_marked").get<std::vector<std::uint32_t>>();
            for (std::uint32_t m : g.srg_marked)
                if (m >= g.nodes.size()) raise(ErrorCode::Parse, "srg mark out of range");
        }
        g.finalize();
        return g;
    } catch (const json::exception& e) {
        raise(ErrorCode::Parse, std::string("malformed graph file: ") + e.what());
    }
}

void export_geojson(const ReebGraph& g, std::ostream& out) {
    if (g.nodes.empty()) raise(ErrorCode::Degenerate, "refusing to export an empty graph");
    json features = json::array();
    for (const ReebNode& n : g.nodes) {
        const char* kind = "intermediate";
        if (g.kind(n.id) == NodeKind::Source) kind = "source";
        else if (g.kind(n.id) == NodeKind::Sink) kind = "sink";
        json props = {{"feature", "node"},
                      {"id", n.id},
                      {"index", n.index},
                      {"member_count", n.members.size()},
                      {"kind", kind}};
        if (g.role == GraphRole::Hrg) props["srg_marked"] = g.is_srg_marked(n.id);
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "Point"}, {"coordinates", {n.centroid.lon, n.centroid.lat}}}},
             {"properties", std::move(props)}});
    }
    for (const ReebEdge& e : g.edges) {
        const ReebNode& a = g.nodes[e.from];
        const ReebNode& b = g.nodes[e.to];
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "LineString"},
               {"coordinates",
                {{a.centroid.lon, a.centroid.lat}, {b.centroid.lon, b.centroid.lat}}}}},
             {"properties",
              {{"feature", "edge"},
               {"from", e.from},
               {"to", e.to},
               {"weight", e.weight},
               {"support_size", e.support.size()}}}});
    }
    json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    out << doc.dump(1) << "\n";
    if (!out) raise(ErrorCode::Io, "write failure while exporting GeoJSON");
}

void export_geojson_file(const ReebGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::Io, "cannot open output file: " + path);
    export_geojson(g, out);
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
    out << "metric,jsd\n";
    for (const auto& [name, value] : report.rows())
        out << name << ',' << format_double(value) << '\n';
}

std::string format_report_table(const EvaluationReport& report) {
    std::ostringstream out;
    std::size_t width = 0;
    for (const auto& [name, value] : report.rows()) width = std::max(width, name.size());
    for (const auto& [name, value] : report.rows()) {
        out << name << std::string(width - name.size() + 2, ' ');
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        out << buf << "\n";
    }
    return out.str();
}

} // namespace reebsim
