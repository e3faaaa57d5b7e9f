#include "tstar/workspace.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace tstar {

std::string to_string(const Cell& c) {
  std::string s = "(" + std::to_string(c.x) + "," + std::to_string(c.y);
  if (c.z) s += "," + std::to_string(c.z);
  return s + ")";
}

namespace {

std::vector<GridWorkspace::Move> make_moves(Connectivity conn);

bool conn_is_3d(Connectivity c) {
  return c == Connectivity::Six || c == Connectivity::TwentySix;
}

Connectivity parse_connectivity(int v, bool grid_3d) {
  switch (v) {
    case 4: if (!grid_3d) return Connectivity::Four; break;
    case 8: if (!grid_3d) return Connectivity::Eight; break;
    case 6: if (grid_3d) return Connectivity::Six; break;
    case 26: if (grid_3d) return Connectivity::TwentySix; break;
    default: break;
  }
  throw ValidationError("unknown connectivity " + std::to_string(v) + " for a " +
                        (grid_3d ? "3-D" : "2-D") + " grid (use 4/8 in 2-D, 6/26 in 3-D)");
}

}  // namespace

GridWorkspace::GridWorkspace(int width, int height, int depth, Connectivity conn, Cell start)
    : width_(width), height_(height), depth_(depth), conn_(conn), start_(start) {
  if (width <= 0 || height <= 0 || depth <= 0)
    throw ValidationError("grid extents must be positive");
  if (conn_is_3d(conn) != (depth > 1))
    throw ValidationError("connectivity does not match grid dimensionality");
  obstacle_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                       static_cast<std::size_t>(depth),
                   0);
  if (!in_bounds(start)) throw ValidationError("start cell " + tstar::to_string(start) + " out of bounds");
}

void GridWorkspace::add_obstacle(Cell c) {
  if (!in_bounds(c)) throw ValidationError("obstacle cell " + tstar::to_string(c) + " out of bounds");
  obstacle_[cell_index(c)] = 1;
}

void GridWorkspace::add_label(Cell c, const std::string& prop) {
  if (!in_bounds(c)) throw ValidationError("labeled cell " + tstar::to_string(c) + " out of bounds");
  labels_[cell_index(c)].insert(prop);
  if (std::find(propositions_.begin(), propositions_.end(), prop) == propositions_.end()) {
    propositions_.push_back(prop);
    std::sort(propositions_.begin(), propositions_.end());
  }
}

void GridWorkspace::validate() const {
  if (is_obstacle(start_))
    throw ValidationError("start cell " + tstar::to_string(start_) + " lies on an obstacle");
  for (const auto& [idx, props] : labels_) {
    if (obstacle_[idx])
      throw ValidationError("cell " + tstar::to_string(cell_at(idx)) +
                            " is both labeled and an obstacle");
    if (props.empty()) throw ValidationError("empty label entry");
  }
}

std::size_t GridWorkspace::num_free_cells() const {
  return obstacle_.size() -
         static_cast<std::size_t>(std::count(obstacle_.begin(), obstacle_.end(), 1));
}

const PropSet& GridWorkspace::label_of(Cell c) const {
  static const PropSet empty;
  auto it = labels_.find(cell_index(c));
  return it == labels_.end() ? empty : it->second;
}

namespace {

std::vector<GridWorkspace::Move> make_moves(Connectivity conn) {
  std::vector<GridWorkspace::Move> moves;
  switch (conn) {
    case Connectivity::Four:
      moves = {{1, 0, 0, false}, {-1, 0, 0, false}, {0, 1, 0, false}, {0, -1, 0, false}};
      break;
    case Connectivity::Eight:
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dx || dy) moves.push_back({dx, dy, 0, dx != 0 && dy != 0});
      break;
    case Connectivity::Six:
      moves = {{1, 0, 0, false},  {-1, 0, 0, false}, {0, 1, 0, false},
               {0, -1, 0, false}, {0, 0, 1, false},  {0, 0, -1, false}};
      break;
    case Connectivity::TwentySix:
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy || dz)
              moves.push_back({dx, dy, dz, std::abs(dx) + std::abs(dy) + std::abs(dz) > 1});
      break;
  }
  return moves;
}

}  // namespace

const std::vector<GridWorkspace::Move>& GridWorkspace::move_table() const {
  static const std::vector<Move> four = make_moves(Connectivity::Four);
  static const std::vector<Move> eight = make_moves(Connectivity::Eight);
  static const std::vector<Move> six = make_moves(Connectivity::Six);
  static const std::vector<Move> twentysix = make_moves(Connectivity::TwentySix);
  switch (conn_) {
    case Connectivity::Four: return four;
    case Connectivity::Eight: return eight;
    case Connectivity::Six: return six;
    case Connectivity::TwentySix: return twentysix;
  }
  return four;
}

std::vector<std::pair<Cell, Cost>> GridWorkspace::neighbors(Cell c) const {
  if (!in_bounds(c)) throw ValidationError("neighbor query out of bounds: " + tstar::to_string(c));
  if (is_obstacle(c)) throw ValidationError("neighbor query on obstacle: " + tstar::to_string(c));
  std::vector<std::pair<Cell, Cost>> out;
  for_each_neighbor(c, [&](Cell n, Cost w) { out.emplace_back(n, w); });
  return out;
}

Cost GridWorkspace::heuristic(Cell a, Cell b) const {
  std::int64_t dx = std::abs(a.x - b.x);
  std::int64_t dy = std::abs(a.y - b.y);
  std::int64_t dz = std::abs(a.z - b.z);
  if (conn_ == Connectivity::Four || conn_ == Connectivity::Six)
    return Cost::from_halves(2 * (dx + dy + dz));
  std::array<std::int64_t, 3> d{dx, dy, dz};
  std::sort(d.begin(), d.end(), std::greater<>());
  // d[0] straight-equivalent moves, d[1] of them upgraded to diagonals
  // (the smallest delta rides along with the middle one at no extra cost).
  return Cost::from_halves(2 * d[0] + d[1]);
}

// ---- ASCII format ----
//
//   dims: W H [D]
//   connectivity: 4|8|6|26
//   <H rows of W chars per layer, layers separated by blank lines>
//   props: 1=p1 2=p2 ...
//
// Cell characters: '.' free, '#' obstacle, 'S' start, '1'-'9'/'a'-'z'
// proposition markers declared in the footer.

namespace {

struct Lines {
  std::vector<std::string> rows;
  std::size_t pos = 0;
  bool done() const { return pos >= rows.size(); }
  const std::string& peek() const { return rows[pos]; }
  std::string next() { return rows[pos++]; }
};

std::string expect_field(Lines& in, const std::string& key) {
  if (in.done()) throw ValidationError("missing '" + key + ":' line");
  std::string line = in.next();
  auto colon = line.find(':');
  if (colon == std::string::npos || line.substr(0, colon) != key)
    throw ValidationError("expected '" + key + ":' line, got '" + line + "'");
  return line.substr(colon + 1);
}

}  // namespace

GridWorkspace GridWorkspace::load(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ValidationError("empty workspace document");
  if (text[first] == '{') {
    // Structured format.
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("workspace document is not valid JSON: ") + e.what());
    }
    static const std::set<std::string> known = {"dims", "connectivity", "start", "obstacles",
                                                "labels"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (!known.count(it.key()))
        throw ValidationError("unknown field '" + it.key() + "' in workspace document");
    for (const auto& f : known)
      if (!doc.contains(f)) throw ValidationError("missing field '" + f + "'");

    auto cell_of = [](const nlohmann::json& j) {
      if (!j.is_array() || j.size() < 2 || j.size() > 3)
        throw ValidationError("cell must be [x,y] or [x,y,z]");
      return Cell{j[0].get<int>(), j[1].get<int>(), j.size() == 3 ? j[2].get<int>() : 0};
    };
    auto dims = doc["dims"].get<std::vector<int>>();
    if (dims.size() < 2 || dims.size() > 3) throw ValidationError("dims must be [W,H] or [W,H,D]");
    int depth = dims.size() == 3 ? dims[2] : 1;
    Connectivity conn = parse_connectivity(doc["connectivity"].get<int>(), depth > 1);
    GridWorkspace ws(dims[0], dims[1], depth, conn, cell_of(doc["start"]));
    for (const auto& j : doc["obstacles"]) ws.add_obstacle(cell_of(j));
    for (auto it = doc["labels"].begin(); it != doc["labels"].end(); ++it)
      for (const auto& j : it.value()) ws.add_label(cell_of(j), it.key());
    ws.validate();
    return ws;
  }

  // ASCII format.
  Lines in;
  {
    std::istringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      in.rows.push_back(line);
    }
  }
  std::istringstream dims(expect_field(in, "dims"));
  int w = 0, h = 0, d = 1;
  if (!(dims >> w >> h)) throw ValidationError("bad dims line");
  dims >> d;
  std::istringstream connss(expect_field(in, "connectivity"));
  int connv = 0;
  if (!(connss >> connv)) throw ValidationError("bad connectivity line");
  Connectivity conn = parse_connectivity(connv, d > 1);

  GridWorkspace ws(w, h, d, conn, {0, 0, 0});
  bool saw_start = false;
  std::map<char, std::vector<Cell>> marked;
  for (int z = 0; z < d; ++z) {
    if (z > 0) {
      if (in.done() || !in.peek().empty())
        throw ValidationError("expected blank line between layers");
      in.next();
    }
    for (int y = 0; y < h; ++y) {
      if (in.done()) throw ValidationError("grid rows truncated");
      std::string row = in.next();
      if (static_cast<int>(row.size()) != w)
        throw ValidationError("row " + std::to_string(y) + " has length " +
                              std::to_string(row.size()) + ", expected " + std::to_string(w));
      for (int x = 0; x < w; ++x) {
        char c = row[static_cast<std::size_t>(x)];
        Cell cell{x, y, z};
        if (c == '.') continue;
        if (c == '#') {
          ws.add_obstacle(cell);
        } else if (c == 'S') {
          if (saw_start) throw ValidationError("multiple start cells");
          ws.start_ = cell;
          saw_start = true;
        } else if ((c >= '1' && c <= '9') || (c >= 'a' && c <= 'z')) {
          marked[c].push_back(cell);
        } else {
          throw ValidationError(std::string("unknown grid character '") + c + "' at row " +
                                std::to_string(y) + ", column " + std::to_string(x));
        }
      }
    }
  }
  if (!saw_start) throw ValidationError("no start cell 'S' in grid");
  while (!in.done() && in.peek().empty()) in.next();
  std::map<char, std::string> prop_of;
  if (!in.done()) {
    std::istringstream props(expect_field(in, "props"));
    std::string item;
    while (props >> item) {
      auto eq = item.find('=');
      if (eq != 1 || item.size() < 3)
        throw ValidationError("bad props entry '" + item + "' (want marker=name)");
      prop_of[item[0]] = item.substr(2);
    }
  }
  for (const auto& [marker, cells] : marked) {
    auto it = prop_of.find(marker);
    if (it == prop_of.end())
      throw ValidationError(std::string("marker '") + marker + "' not declared in props line");
    for (Cell c : cells) ws.add_label(c, it->second);
  }
  while (!in.done()) {
    if (!in.next().empty()) throw ValidationError("trailing content after props line");
  }
  ws.validate();
  return ws;
}

std::string GridWorkspace::to_ascii() const {
  // Only single-marker cells are representable; fall back is the caller's
  // job (to_json round-trips everything).
  std::map<std::string, char> marker_of;
  char next_digit = '1', next_alpha = 'a';
  for (const auto& p : propositions_) {
    if (next_digit <= '9')
      marker_of[p] = next_digit++;
    else if (next_alpha <= 'z')
      marker_of[p] = next_alpha++;
    else
      throw ValidationError("too many propositions for the ASCII format");
  }
  for (const auto& [idx, props] : labels_)
    if (props.size() > 1)
      throw ValidationError("cell " + tstar::to_string(cell_at(idx)) +
                            " carries multiple propositions; use the structured format");
  std::ostringstream out;
  out << "dims: " << width_ << ' ' << height_;
  if (depth_ > 1) out << ' ' << depth_;
  out << "\nconnectivity: " << static_cast<int>(conn_) << '\n';
  for (int z = 0; z < depth_; ++z) {
    if (z > 0) out << '\n';
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        Cell c{x, y, z};
        char ch = '.';
        if (is_obstacle(c)) ch = '#';
        else if (c == start_) ch = 'S';
        else {
          auto it = labels_.find(cell_index(c));
          if (it != labels_.end()) ch = marker_of.at(*it->second.begin());
        }
        out << ch;
      }
      out << '\n';
    }
  }
  if (!propositions_.empty()) {
    out << "props:";
    for (const auto& [prop, marker] : marker_of) out << ' ' << marker << '=' << prop;
    // marker_of is keyed by name; emit sorted by marker for readability
  }
  std::string s = out.str();
  if (!propositions_.empty()) s += "\n";
  return s;
}

std::string GridWorkspace::to_json() const {
  nlohmann::ordered_json doc;
  if (depth_ > 1)
    doc["dims"] = {width_, height_, depth_};
  else
    doc["dims"] = {width_, height_};
  doc["connectivity"] = static_cast<int>(conn_);
  auto jcell = [this](Cell c) {
    return depth_ > 1 ? nlohmann::ordered_json{c.x, c.y, c.z} : nlohmann::ordered_json{c.x, c.y};
  };
  doc["start"] = jcell(start_);
  auto& obs = doc["obstacles"] = nlohmann::ordered_json::array();
  for (std::uint32_t idx = 0; idx < obstacle_.size(); ++idx)
    if (obstacle_[idx]) obs.push_back(jcell(cell_at(idx)));
  auto& labels = doc["labels"] = nlohmann::ordered_json::object();
  for (const auto& p : propositions_) labels[p] = nlohmann::ordered_json::array();
  for (const auto& [idx, props] : labels_)
    for (const auto& p : props) labels[p].push_back(jcell(cell_at(idx)));
  return doc.dump(2) + "\n";
}

}  // namespace tstar
