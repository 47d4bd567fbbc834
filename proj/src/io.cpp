#include "fatou/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fatou/error.hpp"

namespace fatou {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path) {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw IoError("cannot open for writing: " + path);
    }
    template <class T>
    void put(const T& v) {
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void magic(const char* m) { out_.write(m, 4); }
    void doubles(std::span<const double> v) {
        out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    void close() {
        out_.close();
        if (!out_) throw IoError("write failed: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw IoError("cannot open for reading: " + path);
    }
    template <class T>
    T get() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in_) throw IoError("truncated file: " + path_);
        return v;
    }
    void expect_magic(const char* m) {
        char buf[4];
        in_.read(buf, 4);
        if (!in_ || std::memcmp(buf, m, 4) != 0) throw IoError(std::string("bad magic (expected ") + m + "): " + path_);
    }
    std::vector<double> doubles(std::size_t n) {
        std::vector<double> v(n);
        in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!in_) throw IoError("truncated file: " + path_);
        return v;
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
};

void put_grid(Writer& w, const Grid& g) {
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(g.dim));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(g.levels));
    w.put<double>(g.extent);
}

Grid get_grid(Reader& r) {
    const auto version = r.get<std::uint32_t>();
    if (version != kVersion) throw IoError("unsupported format version " + std::to_string(version) + ": " + r.path());
    const auto dim = r.get<std::uint32_t>();
    const auto levels = r.get<std::uint32_t>();
    const auto extent = r.get<double>();
    try {
        return make_grid(static_cast<int>(dim), static_cast<int>(levels), extent);
    } catch (const ParameterError& e) {
        throw IoError(std::string("invalid grid header (") + e.what() + "): " + r.path());
    }
}

std::ifstream open_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::vector<double> split_numbers(const std::string& line, const std::string& path) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw IoError("malformed CSV cell '" + cell + "': " + path);
        }
    }
    return v;
}

} // namespace

void write_grid_function(const std::string& path, const GridFunction& f) {
    Writer w(path);
    w.magic("FLGF");
    put_grid(w, f.grid());
    w.doubles(f.samples());
    w.close();
}

GridFunction read_grid_function(const std::string& path) {
    Reader r(path);
    r.expect_magic("FLGF");
    const Grid g = get_grid(r);
    return GridFunction(g, r.doubles(g.size()));
}

void write_grid_function_csv(const std::string& path, const GridFunction& f) {
    std::ostringstream os;
    os << std::setprecision(17);
    const Grid& g = f.grid();
    os << (g.dim == 1 ? "index,x,value\n" : "index,x,y,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point p = g.coord(i);
        os << i << ',' << p[0];
        if (g.dim == 2) os << ',' << p[1];
        os << ',' << f[i] << '\n';
    }
    write_text(path, os.str());
}

GridFunction read_grid_function_csv(const std::string& path, const Grid& grid) {
    auto in = open_text(path);
    std::string line;
    std::getline(in, line);
    std::vector<double> v(grid.size(), 0.0);
    std::vector<char> seen(grid.size(), 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_numbers(line, path);
        if (cells.size() != static_cast<std::size_t>(grid.dim) + 2) throw IoError("wrong column count: " + path);
        const auto i = static_cast<std::size_t>(cells.front());
        if (i >= grid.size()) throw IoError("sample index out of range: " + path);
        v[i] = cells.back();
        seen[i] = 1;
    }
    for (char s : seen) {
        if (!s) throw IoError("CSV does not cover every grid sample: " + path);
    }
    return GridFunction(grid, std::move(v));
}

void write_half_space_field(const std::string& path, const HalfSpaceField& u) {
    Writer w(path);
    w.magic("FLHF");
    put_grid(w, u.grid());
    w.put<std::uint32_t>(static_cast<std::uint32_t>(u.levels()));
    w.doubles(u.heights());
    for (const auto& s : u.slices()) w.doubles(s.samples());
    w.close();
}

HalfSpaceField read_half_space_field(const std::string& path) {
    Reader r(path);
    r.expect_magic("FLHF");
    const Grid g = get_grid(r);
    const auto K = r.get<std::uint32_t>();
    std::vector<double> heights = r.doubles(K);
    std::vector<GridFunction> slices;
    for (std::uint32_t k = 0; k < K; ++k) slices.emplace_back(g, r.doubles(g.size()));
    return HalfSpaceField(g, std::move(heights), std::move(slices));
}

void write_point_set_csv(const std::string& path, const PointSet& set) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const Point& p : set.points) {
        os << p[0];
        if (set.grid.dim == 2) os << ',' << p[1];
        os << '\n';
    }
    write_text(path, os.str());
}

PointSet read_point_set_csv(const std::string& path, const Grid& grid) {
    auto in = open_text(path);
    std::string line;
    std::vector<Point> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_numbers(line, path);
        if (cells.size() != static_cast<std::size_t>(grid.dim)) throw IoError("wrong column count: " + path);
        pts.push_back(Point{cells[0], grid.dim == 2 ? cells[1] : 0.0});
    }
    return make_point_set(grid, std::move(pts));
}

void write_lipschitz_graph(const std::string& path, const LipschitzGraph& graph) {
    Writer w(path);
    w.magic("FLGF");
    put_grid(w, graph.grid());
    w.doubles(graph.phi.samples());
    w.magic("FLLG");
    w.put<double>(graph.M);
    w.put<std::int32_t>(graph.smooth_class);
    w.close();
}

LipschitzGraph read_lipschitz_graph(const std::string& path) {
    Reader r(path);
    r.expect_magic("FLGF");
    const Grid g = get_grid(r);
    GridFunction phi(g, r.doubles(g.size()));
    r.expect_magic("FLLG");
    const double M = r.get<double>();
    const auto k = r.get<std::int32_t>();
    return make_lipschitz_graph(std::move(phi), M, k);
}

void write_text(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    out.close();
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
    auto in = open_text(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace fatou
