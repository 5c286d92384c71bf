#include "fairmatch/trace.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fairmatch {

using nlohmann::json;

std::string trace_mode_of(HistoryMode mode) {
    return mode == HistoryMode::PerRound ? "rounds" : "time";
}

TraceRecord Trace::record_from(const engines::StepReport& report) {
    TraceRecord rec;
    rec.t = report.t;
    for (const MatchEvent& e : report.events) rec.matches.emplace_back(e.n_index, e.m_index);
    rec.weight = report.weight;
    rec.iterations = report.iterations;
    rec.ef1 = report.ef1;
    rec.envy_bounded = report.envy_bounded;
    rec.envy_cycle_free = report.envy_cycle_free;
    return rec;
}

void Trace::write(std::ostream& out) const {
    json header;
    header["format"] = format;
    header["engine"] = engine;
    header["mode"] = mode;
    header["a"] = a ? json(a->str()) : json(nullptr);
    out << header.dump() << "\n";
    for (const TraceRecord& rec : records) {
        json line;
        line["t"] = rec.t;
        json matches = json::array();
        for (const auto& [ni, mi] : rec.matches) matches.push_back(json::array({ni, mi}));
        line["matches"] = std::move(matches);
        line["weight"] = rec.weight ? json(rec.weight->str()) : json(nullptr);
        line["iterations"] = rec.iterations;
        json verdicts;
        verdicts["ef1"] = rec.ef1;
        verdicts["envy_bounded"] = rec.envy_bounded ? json(*rec.envy_bounded) : json(nullptr);
        verdicts["envy_cycle_free"] =
            rec.envy_cycle_free ? json(*rec.envy_cycle_free) : json(nullptr);
        line["verdicts"] = std::move(verdicts);
        out << line.dump() << "\n";
    }
}

void Trace::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace file: " + path.string());
    write(out);
}

Trace Trace::read(std::istream& in) {
    Trace trace;
    std::string line;
    bool have_header = false;
    int last_t = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid trace line: ") + e.what());
        }
        if (!have_header) {
            if (doc.value("format", 0) != 1) throw ParseError("unsupported trace format version");
            trace.format = 1;
            trace.engine = doc.at("engine").get<std::string>();
            trace.mode = doc.at("mode").get<std::string>();
            if (trace.mode != "rounds" && trace.mode != "time")
                throw ParseError("trace mode must be \"rounds\" or \"time\"");
            if (doc.contains("a") && !doc.at("a").is_null())
                trace.a = Rat::parse(doc.at("a").get<std::string>());
            have_header = true;
            continue;
        }
        TraceRecord rec;
        rec.t = doc.at("t").get<int>();
        if (rec.t != last_t + 1) throw ParseError("trace timesteps must increase one by one");
        last_t = rec.t;
        for (const auto& pair : doc.at("matches")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("trace matches must be [n_index, m_index] pairs");
            rec.matches.emplace_back(pair[0].get<int>(), pair[1].get<int>());
        }
        if (doc.contains("weight") && !doc.at("weight").is_null())
            rec.weight = Rat::parse(doc.at("weight").get<std::string>());
        rec.iterations = doc.value("iterations", 0);
        if (doc.contains("verdicts")) {
            const auto& v = doc.at("verdicts");
            rec.ef1 = v.value("ef1", true);
            if (v.contains("envy_bounded") && !v.at("envy_bounded").is_null())
                rec.envy_bounded = v.at("envy_bounded").get<bool>();
            if (v.contains("envy_cycle_free") && !v.at("envy_cycle_free").is_null())
                rec.envy_cycle_free = v.at("envy_cycle_free").get<bool>();
        }
        trace.records.push_back(std::move(rec));
    }
    if (!have_header) throw ParseError("trace is missing its header line");
    return trace;
}

Trace Trace::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file: " + path.string());
    return read(in);
}

}  // namespace fairmatch
