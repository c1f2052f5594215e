#include "hydromig/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hydromig {

Mesh1D Mesh1D::uniform(double length, int n_cells, double cross_section)
{
    if (!(length > 0.0) || n_cells < 1 || !(cross_section > 0.0))
        throw std::invalid_argument("mesh: need positive length, cross_section and n_cells >= 1");
    Mesh1D m;
    m.n_cells = n_cells;
    m.length = length;
    m.cross_section = cross_section;
    m.edges.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        m.edges[i] = length * static_cast<double>(i) / static_cast<double>(n_cells);
    m.edges[n_cells] = length;
    m.centers.resize(n_cells);
    m.widths.resize(n_cells);
    for (int i = 0; i < n_cells; ++i) {
        m.widths[i] = m.edges[i + 1] - m.edges[i];
        m.centers[i] = 0.5 * (m.edges[i] + m.edges[i + 1]);
    }
    m.rock_of_cell.assign(n_cells, 0);
    return m;
}

void Scenario::validate() const
{
    const int n = mesh.n_cells;
    if (n < 1) throw std::invalid_argument("scenario: empty mesh");
    if (static_cast<int>(mesh.widths.size()) != n ||
        static_cast<int>(mesh.centers.size()) != n ||
        static_cast<int>(mesh.edges.size()) != n + 1 ||
        static_cast<int>(mesh.rock_of_cell.size()) != n)
        throw std::invalid_argument("scenario: inconsistent mesh arrays");
    for (double w : mesh.widths)
        if (!(w > 0.0)) throw std::invalid_argument("scenario: nonpositive cell width");
    for (int r : mesh.rock_of_cell)
        if (r < 0 || r >= static_cast<int>(rocks.size()))
            throw std::invalid_argument("scenario: rock index out of range");
    if (static_cast<int>(initial.size()) != n)
        throw std::invalid_argument("scenario: initial state size mismatch");
    for (const CellState& u : initial) {
        if (!(u.rho_l_h >= 0.0)) throw std::invalid_argument("scenario: initial rho_l_h < 0");
        if (!std::isfinite(u.p_l)) throw std::invalid_argument("scenario: initial p_l not finite");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("scenario: t_end must be positive");
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument("scenario: need 0 < dt_min <= dt_init <= dt_max");
    double prev = 0.0;
    for (double t : snapshot_times) {
        if (t < prev) throw std::invalid_argument("scenario: snapshot times not sorted");
        if (t > t_end) throw std::invalid_argument("scenario: snapshot time beyond t_end");
        prev = t;
    }
    if (!std::isfinite(gravity_x)) throw std::invalid_argument("scenario: gravity not finite");
}

namespace {

void assign_zones(Mesh1D& mesh, const std::vector<double>& zone_breaks)
{
    // zone i covers [break_i, break_{i+1}); cells are assigned by center
    for (int c = 0; c < mesh.n_cells; ++c) {
        int zone = 0;
        for (std::size_t b = 1; b + 1 < zone_breaks.size(); ++b)
            if (mesh.centers[c] >= zone_breaks[b]) zone = static_cast<int>(b);
        mesh.rock_of_cell[c] = zone;
    }
}

std::vector<double> years_list_to_seconds(std::initializer_list<double> years)
{
    std::vector<double> out;
    for (double y : years) out.push_back(years_to_seconds(y));
    return out;
}

} // namespace

Scenario build_case(int id, int n_cells)
{
    Scenario sc;
    sc.fluid = FluidParams::water_hydrogen();
    const double C_h = sc.fluid.C_h;

    switch (id) {
    case 1: {
        if (n_cells == 0) n_cells = 200;
        sc.name = "case1";
        sc.mesh = Mesh1D::uniform(200.0, n_cells, 20.0);
        sc.rocks = {RockParams::make(5e-20, 0.15, 2e6, 1.49, 0.4, 0.0)};
        sc.bc_left = BoundaryCondition::neumann(0.0, flux_from_mg_per_m2_yr(9.28));
        sc.bc_right = BoundaryCondition::dirichlet(1e6, 0.0);
        sc.initial.assign(n_cells, CellState{1e6, 0.0});
        sc.t_end = years_to_seconds(1e6);
        sc.dt_init = years_to_seconds(1e2);
        sc.dt_min = years_to_seconds(1.0);
        sc.dt_max = years_to_seconds(5e4);
        sc.snapshot_times = years_list_to_seconds({1200.0, 4e4, 2e5, 1e6});
        break;
    }
    case 2: {
        if (n_cells == 0) n_cells = 200;
        sc.name = "case2";
        sc.mesh = Mesh1D::uniform(200.0, n_cells, 20.0);
        sc.rocks = {RockParams::make(5e-20, 0.15, 2e6, 1.49, 0.4, 0.0)};
        sc.bc_left = BoundaryCondition::neumann(0.0, flux_from_mg_per_m2_yr(55.7));
        sc.bc_right = BoundaryCondition::dirichlet(1e6, C_h * 1.1e6);
        sc.initial.assign(n_cells, CellState{1e6, C_h * 1.1e6});
        sc.t_end = years_to_seconds(1e6);
        sc.dt_init = years_to_seconds(1e2);
        sc.dt_min = years_to_seconds(1.0);
        sc.dt_max = years_to_seconds(5e3);
        sc.snapshot_times = years_list_to_seconds({500.0, 1500.0, 5e3, 1.7e4, 2e4, 1e6});
        break;
    }
    case 3: {
        if (n_cells == 0) n_cells = 200;
        sc.name = "case3";
        sc.mesh = Mesh1D::uniform(200.0, n_cells, 20.0);
        sc.rocks = {RockParams::make(1e-18, 0.3, 2e6, 1.54, 0.01, 0.0),
                    RockParams::make(5e-20, 0.15, 15e6, 1.49, 0.4, 0.0)};
        assign_zones(sc.mesh, {0.0, 20.0, 200.0});
        sc.bc_left = BoundaryCondition::neumann(0.0, flux_from_mg_per_m2_yr(5.57));
        sc.bc_right = BoundaryCondition::dirichlet(1e6, 0.0);
        sc.initial.assign(n_cells, CellState{1e6, 0.0});
        sc.t_end = years_to_seconds(1e6);
        sc.dt_init = years_to_seconds(1e2);
        sc.dt_min = years_to_seconds(1.0);
        sc.dt_max = years_to_seconds(2e4);
        sc.snapshot_times = years_list_to_seconds({3.8e4, 5.4e4, 1.3e5, 1e6});
        break;
    }
    case 4: {
        if (n_cells == 0) n_cells = 500;
        sc.name = "case4";
        sc.mesh = Mesh1D::uniform(1.0, n_cells, 0.1);
        sc.rocks = {RockParams::make(1e-18, 0.3, 2e6, 1.54, 0.01, 0.0)};
        sc.bc_left = BoundaryCondition::no_flux();
        sc.bc_right = BoundaryCondition::no_flux();
        sc.initial.resize(n_cells);
        for (int c = 0; c < n_cells; ++c) {
            const bool left_half = sc.mesh.centers[c] < 0.5;
            sc.initial[c] = left_half ? CellState{1e6, C_h * 1e6}
                                      : CellState{1e6, C_h * 2.5e6};
        }
        sc.t_end = 1e6;
        sc.dt_init = 0.33;
        sc.dt_min = 0.33e-2;
        sc.dt_max = 1.67e4;
        sc.snapshot_times = {1e3, 1e4, 1e5, 1.92e5, 5e5, 1e6};
        break;
    }
    default:
        throw std::invalid_argument("build_case: id must be 1, 2, 3 or 4");
    }
    sc.validate();
    return sc;
}

// ---------------------------------------------------------------------------
// config loader
// ---------------------------------------------------------------------------

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

struct ParsedConfig {
    std::map<std::string, Section> sections; // in insertion order not needed; zone order from x_min
};

[[noreturn]] void fail_line(int line, const std::string& msg)
{
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ParsedConfig parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    ParsedConfig cfg;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail_line(line, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) fail_line(line, "empty section name");
            cfg.sections[section]; // create
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_line(line, "expected 'key = value'");
        if (section.empty()) fail_line(line, "key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail_line(line, "empty key");
        if (value.empty()) fail_line(line, "empty value for key '" + key + "'");
        auto [it, inserted] = cfg.sections[section].emplace(key, Entry{value, line, false});
        if (!inserted) fail_line(line, "duplicate key '" + key + "' in section [" + section + "]");
    }
    return cfg;
}

double parse_number(const Entry& e, const std::string& key)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        fail_line(e.line, "key '" + key + "': not a number: '" + e.value + "'");
    }
    if (trim(e.value.substr(pos)).empty()) return v;
    fail_line(e.line, "key '" + key + "': trailing garbage in '" + e.value + "'");
}

/// Flux keys accept an optional unit suffix: `55.7 mg_per_m2_yr`.
double parse_flux(const Entry& e, const std::string& key)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        fail_line(e.line, "key '" + key + "': not a number: '" + e.value + "'");
    }
    const std::string unit = trim(e.value.substr(pos));
    if (unit.empty()) return v; // SI, kg/m^2/s
    if (unit == "mg_per_m2_yr") return flux_from_mg_per_m2_yr(v);
    fail_line(e.line, "key '" + key + "': unknown unit '" + unit + "'");
}

std::vector<double> parse_number_list(const Entry& e, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail_line(e.line, "key '" + key + "': empty list element");
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (!trim(tok.substr(pos)).empty()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail_line(e.line, "key '" + key + "': not a number: '" + tok + "'");
        }
    }
    return out;
}

Entry& require(Section& sec, const std::string& section_name, const std::string& key)
{
    auto it = sec.find(key);
    if (it == sec.end())
        throw ConfigError("config: missing key '" + key + "' in section [" + section_name + "]");
    it->second.used = true;
    return it->second;
}

Entry* optional(Section& sec, const std::string& key)
{
    auto it = sec.find(key);
    if (it == sec.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

void reject_unused(const ParsedConfig& cfg)
{
    for (const auto& [name, sec] : cfg.sections)
        for (const auto& [key, entry] : sec)
            if (!entry.used)
                fail_line(entry.line, "unknown key '" + key + "' in section [" + name + "]");
}

struct Zone {
    double x_min, x_max;
    std::string name;
};

} // namespace

Scenario load_config(const std::string& path)
{
    ParsedConfig cfg = parse_file(path);
    Scenario sc;

    // known section names: fluid, mesh, time, bc.left, bc.right, rock.*, ic.*
    for (const auto& [name, sec] : cfg.sections) {
        (void)sec;
        const bool known = name == "fluid" || name == "mesh" || name == "time" ||
                           name == "bc.left" || name == "bc.right" ||
                           name.rfind("rock.", 0) == 0 || name.rfind("ic.", 0) == 0;
        if (!known) throw ConfigError("config: unknown section [" + name + "]");
    }

    auto section = [&](const std::string& name) -> Section& {
        auto it = cfg.sections.find(name);
        if (it == cfg.sections.end())
            throw ConfigError("config: missing section [" + name + "]");
        return it->second;
    };

    {
        Section& f = section("fluid");
        sc.fluid = FluidParams::make(parse_number(require(f, "fluid", "rho_w_std"), "rho_w_std"),
                                     parse_number(require(f, "fluid", "mu_l"), "mu_l"),
                                     parse_number(require(f, "fluid", "mu_g"), "mu_g"),
                                     parse_number(require(f, "fluid", "D"), "D"),
                                     parse_number(require(f, "fluid", "M_w"), "M_w"),
                                     parse_number(require(f, "fluid", "M_h"), "M_h"),
                                     parse_number(require(f, "fluid", "H"), "H"),
                                     parse_number(require(f, "fluid", "T"), "T"));
    }

    int n_cells = 0;
    {
        Section& m = section("mesh");
        const double length = parse_number(require(m, "mesh", "length"), "length");
        const double nc = parse_number(require(m, "mesh", "n_cells"), "n_cells");
        const double area = parse_number(require(m, "mesh", "cross_section"), "cross_section");
        if (nc < 1.0 || nc != std::floor(nc))
            throw ConfigError("config: n_cells must be a positive integer");
        n_cells = static_cast<int>(nc);
        sc.mesh = Mesh1D::uniform(length, n_cells, area);
        if (Entry* g = optional(m, "gravity")) sc.gravity_x = parse_number(*g, "gravity");
    }

    // rock zones, ordered by x_min, must tile [0, length]
    {
        std::vector<Zone> zones;
        for (auto& [name, sec] : cfg.sections) {
            if (name.rfind("rock.", 0) != 0) continue;
            Zone z;
            z.name = name;
            z.x_min = parse_number(require(sec, name, "x_min"), "x_min");
            z.x_max = parse_number(require(sec, name, "x_max"), "x_max");
            zones.push_back(z);
        }
        if (zones.empty()) throw ConfigError("config: no [rock.<name>] section");
        std::sort(zones.begin(), zones.end(),
                  [](const Zone& a, const Zone& b) { return a.x_min < b.x_min; });
        const double tol = 1e-9 * sc.mesh.length;
        if (std::fabs(zones.front().x_min) > tol ||
            std::fabs(zones.back().x_max - sc.mesh.length) > tol)
            throw ConfigError("config: rock zones must cover [0, length]");
        std::vector<double> breaks{0.0};
        for (std::size_t i = 0; i < zones.size(); ++i) {
            if (i + 1 < zones.size() && std::fabs(zones[i].x_max - zones[i + 1].x_min) > tol)
                throw ConfigError("config: rock zones must tile without gaps or overlap");
            Section& sec = cfg.sections[zones[i].name];
            sc.rocks.push_back(RockParams::make(
                parse_number(require(sec, zones[i].name, "k"), "k"),
                parse_number(require(sec, zones[i].name, "phi"), "phi"),
                parse_number(require(sec, zones[i].name, "P_r"), "P_r"),
                parse_number(require(sec, zones[i].name, "n"), "n"),
                parse_number(require(sec, zones[i].name, "S_lr"), "S_lr"),
                parse_number(require(sec, zones[i].name, "S_gr"), "S_gr")));
            breaks.push_back(zones[i].x_max);
        }
        assign_zones(sc.mesh, breaks);
    }

    auto read_bc = [&](const std::string& name) -> BoundaryCondition {
        Section& b = section(name);
        Entry& kind = require(b, name, "kind");
        if (kind.value == "neumann") {
            return BoundaryCondition::neumann(
                parse_flux(require(b, name, "water_flux"), "water_flux"),
                parse_flux(require(b, name, "hydrogen_flux"), "hydrogen_flux"));
        }
        if (kind.value == "dirichlet") {
            return BoundaryCondition::dirichlet(
                parse_number(require(b, name, "p_l"), "p_l"),
                parse_number(require(b, name, "rho_l_h"), "rho_l_h"));
        }
        fail_line(kind.line, "kind must be 'neumann' or 'dirichlet'");
    };
    sc.bc_left = read_bc("bc.left");
    sc.bc_right = read_bc("bc.right");

    // initial-condition zones
    {
        struct ICZone {
            Zone z;
            CellState state;
        };
        std::vector<ICZone> zones;
        for (auto& [name, sec] : cfg.sections) {
            if (name.rfind("ic.", 0) != 0) continue;
            ICZone z;
            z.z.name = name;
            z.z.x_min = parse_number(require(sec, name, "x_min"), "x_min");
            z.z.x_max = parse_number(require(sec, name, "x_max"), "x_max");
            z.state.p_l = parse_number(require(sec, name, "p_l"), "p_l");
            z.state.rho_l_h = parse_number(require(sec, name, "rho_l_h"), "rho_l_h");
            zones.push_back(z);
        }
        if (zones.empty()) throw ConfigError("config: no [ic.<name>] section");
        std::sort(zones.begin(), zones.end(),
                  [](const ICZone& a, const ICZone& b) { return a.z.x_min < b.z.x_min; });
        const double tol = 1e-9 * sc.mesh.length;
        if (std::fabs(zones.front().z.x_min) > tol ||
            std::fabs(zones.back().z.x_max - sc.mesh.length) > tol)
            throw ConfigError("config: ic zones must cover [0, length]");
        sc.initial.resize(n_cells);
        for (int c = 0; c < n_cells; ++c) {
            int zi = 0;
            for (std::size_t z = 1; z < zones.size(); ++z)
                if (sc.mesh.centers[c] >= zones[z].z.x_min) zi = static_cast<int>(z);
            sc.initial[c] = zones[zi].state;
        }
    }

    {
        Section& t = section("time");
        sc.t_end = parse_number(require(t, "time", "t_end"), "t_end");
        sc.dt_init = parse_number(require(t, "time", "dt_init"), "dt_init");
        sc.dt_min = parse_number(require(t, "time", "dt_min"), "dt_min");
        sc.dt_max = parse_number(require(t, "time", "dt_max"), "dt_max");
        if (Entry* s = optional(t, "snapshots")) {
            sc.snapshot_times = parse_number_list(*s, "snapshots");
            std::sort(sc.snapshot_times.begin(), sc.snapshot_times.end());
        }
    }

    reject_unused(cfg);
    sc.name = path;
    sc.validate();
    return sc;
}

} // namespace hydromig
