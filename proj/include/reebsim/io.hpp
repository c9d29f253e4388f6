#pragma once

#include <iosfwd>
#include <string>

#include "reebsim/dataset.hpp"
#include "reebsim/metrics.hpp"
#include "reebsim/reeb.hpp"

namespace reebsim {

// Dataset CSV: two header comment lines (format marker; L, sampling interval,
// coordinate convention), a column header, then rows sorted by
// (agent_id, day, index). See docs/formats.md.
PopulationDataset parse_dataset(std::istream& in);
PopulationDataset parse_dataset_file(const std::string& path);

void write_dataset(const PopulationDataset& data, std::ostream& out);
void write_dataset_file(const PopulationDataset& data, const std::string& path);

// Versioned JSON graph files; load(save(g)) is graph-equal with weights
// preserved to full precision.
void save_graph(const ReebGraph& g, const std::string& path);
ReebGraph load_graph(const std::string& path);

// GeoJSON FeatureCollection: nodes as Points (index, member count, kind,
// srg_marked), edges as LineStrings between centroids (weight, support size).
void export_geojson(const ReebGraph& g, std::ostream& out);
void export_geojson_file(const ReebGraph& g, const std::string& path);

// Flat metric,value table of the six JSDs.
void write_report_csv(const EvaluationReport& report, std::ostream& out);
std::string format_report_table(const EvaluationReport& report);

} // namespace reebsim
