#include <string>

#include "json_codec.hpp"
#include "sociohub/store.hpp"

namespace sociohub {

std::optional<ExportFormat> parse_export_format(std::string_view name) noexcept {
  if (name == "jsonlines") return ExportFormat::jsonlines;
  if (name == "csv") return ExportFormat::csv;
  return std::nullopt;
}

std::string_view media_type(ExportFormat format) noexcept {
  return format == ExportFormat::csv ? "text/csv; charset=utf-8" : "application/x-ndjson";
}

std::string_view file_extension(ExportFormat format) noexcept {
  return format == ExportFormat::csv ? "csv" : "ndjson";
}

namespace {

void append_csv_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string render_csv(const QueryRecord& record) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : record.results) {
    const auto& p = r.profile;
    const std::string fields[] = {record.id,
                                  record.query,
                                  std::string(to_string(p.platform)),
                                  p.handle,
                                  p.display_name,
                                  p.bio,
                                  std::to_string(p.followers),
                                  std::to_string(p.following),
                                  p.location.value_or(""),
                                  format_iso8601(p.retrieved_at)};
    bool first = true;
    for (const auto& field : fields) {
      if (!first) out += ',';
      first = false;
      append_csv_field(out, field);
    }
    out += '\n';
  }
  return out;
}

std::string render_jsonlines(const QueryRecord& record) {
  detail::Json header = detail::Json::object();
  header["id"] = record.id;
  header["query"] = record.query;
  header["created_at"] = format_iso8601(record.created_at);
  std::string out = detail::dump(header) + "\n";
  for (const auto& r : record.results) out += serialize_profile(r.profile) + "\n";
  return out;
}

}  // namespace

std::string render_export(const QueryRecord& record, ExportFormat format) {
  return format == ExportFormat::csv ? render_csv(record) : render_jsonlines(record);
}

}  // namespace sociohub
