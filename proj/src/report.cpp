#include <daosim/harness.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace daosim {

void write_csv(std::span<const ReportRow> rows, std::ostream& out, bool timing)
{
    if (rows.empty())
        throw error(errc::validation_error, "refusing to write a report with no rows");

    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.scenario_id << ',' << r.mechanism << ',' << (r.weights ? r.weights->to_string() : "") << ','
            << r.span << ',' << (r.succeeded ? "true" : "false") << ',';
        switch (r.flip_status) {
        case FlipCapital::not_computed: break;
        case FlipCapital::found: out << r.min_flip_capital.value(); break;
        case FlipCapital::unreachable: out << "unreachable"; break;
        }
        out << ',' << (r.carry_cost ? format_decimal6(*r.carry_cost) : "") << ','
            << (r.recency_share ? format_decimal6(*r.recency_share) : "") << ',';
        if (r.power_evals)
            out << *r.power_evals;
        out << ',';
        if (timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", r.wall_time_ms);
            out << buf;
        }
        out << '\n';
    }
}

void emit_csv(std::span<const ReportRow> rows, const std::filesystem::path& path, bool timing)
{
    if (rows.empty())
        throw error(errc::validation_error, "refusing to write a report with no rows");
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw error(errc::io_error, "cannot open " + path.string() + " for writing");
    write_csv(rows, out, timing);
    out.flush();
    if (!out)
        throw error(errc::io_error, "failed writing " + path.string());
}

} // namespace daosim
