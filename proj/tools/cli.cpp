#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ldq/codec.hpp"
#include "ldq/engines.hpp"
#include "ldq/errors.hpp"
#include "ldq/netweb.hpp"
#include "ldq/query.hpp"
#include "ldq/web.hpp"

namespace ldq::cli {
namespace {

// Flag combinations that are wrong regardless of the data.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidValue("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InvalidValue("cannot write '" + path + "'");
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::unique_ptr<Web> LoadWeb(const std::string& spec) {
  if (spec.starts_with("gen:numbers")) {
    std::string_view rest = std::string_view(spec).substr(11);
    if (rest.empty()) return std::make_unique<NumberWeb>();
    if (rest.front() != ':') throw UsageError("bad web '" + spec + "'");
    try {
      std::size_t used = 0;
      std::uint64_t m = std::stoull(std::string(rest.substr(1)), &used);
      if (used != rest.size() - 1 || m == 0) throw std::invalid_argument("m");
      return std::make_unique<NumberWeb>(m);
    } catch (const std::logic_error&) {
      throw UsageError("bad modulus in web '" + spec + "'");
    }
  }
  if (spec.starts_with("tcp://")) {
    try {
      return std::make_unique<RemoteWeb>(Address::Parse(spec.substr(6)));
    } catch (const InvalidValue& e) {
      throw UsageError(e.what());
    }
  }
  std::string text = ReadFile(spec);
  if (EndsWith(spec, ".ldweb")) {
    return std::make_unique<FiniteWeb>(DecodeWeb(text));
  }
  return std::make_unique<FiniteWeb>(LoadFixture(text));
}

std::vector<std::size_t> ParseOrder(const std::string& text, std::size_t n) {
  std::vector<std::size_t> order;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      std::size_t k = std::stoul(item, &used);
      if (used != item.size() || k == 0 || k > n) throw std::out_of_range("k");
      order.push_back(k - 1);
    } catch (const std::logic_error&) {
      throw UsageError("--order entries must be pattern numbers 1.." +
                       std::to_string(n));
    }
  }
  return order;
}

struct QueryFlags {
  std::string web;
  std::string query;
  std::vector<std::string> seeds;
  std::string criterion = "match";
  std::optional<std::size_t> max_derefs;

  void Register(CLI::App* app) {
    app->add_option("--web", web,
                    "fixture or .ldweb file, tcp://host:port, or "
                    "gen:numbers[:m]")
        ->required();
    app->add_option("--query", query, "query file")->required();
    app->add_option("--seed", seeds,
                    "seed identifier (repeatable); default: the query's "
                    "identifiers");
    app->add_option("--criterion", criterion, "all, match or none")
        ->check(CLI::IsMember({"all", "match", "none"}));
    app->add_option("--max-derefs", max_derefs, "dereference budget");
  }

  QuerySpec Spec() const {
    Bqp b = ParseQuery(ReadFile(query));
    std::vector<Identifier> ids;
    if (seeds.empty()) {
      ids = IdsOfPattern(b);
    } else {
      for (const auto& s : seeds) {
        try {
          ids.emplace_back(s);
        } catch (const InvalidValue& e) {
          throw UsageError(e.what());
        }
      }
    }
    return QuerySpec(std::move(b), std::move(ids),
                     ReachabilityCriterion::FromName(criterion));
  }
};

struct RunFlags : QueryFlags {
  std::string engine = "ltb";
  std::string order;
  std::optional<std::size_t> max_tasks;
  std::optional<std::size_t> max_solutions;
  std::optional<std::size_t> max_rounds;
  std::string policy = "fifo";
  std::string expansion = "matched-triple";
  bool trace = false;
  std::string format = "text";

  void Register(CLI::App* app) {
    QueryFlags::Register(app);
    app->add_option("--engine", engine)
        ->check(CLI::IsMember({"oracle", "machine", "ltb", "iterator"}));
    app->add_option("--order", order,
                    "iterator pattern order, e.g. 2,1,3 (numbers are query "
                    "file positions)");
    app->add_option("--max-tasks", max_tasks);
    app->add_option("--max-solutions", max_solutions);
    app->add_option("--max-rounds", max_rounds);
    app->add_option("--policy", policy, "fifo, lifo or random:<seed>");
    app->add_option("--expansion", expansion,
                    "what a task dereferences: valuation or matched-triple")
        ->check(CLI::IsMember({"valuation", "matched-triple"}));
    app->add_flag("--trace", trace, "trace to stderr");
    app->add_option("--format", format)
        ->check(CLI::IsMember({"text", "ldres"}));
  }
};

std::string StatsLine(const SolutionStream& s, std::size_t solutions,
                      const std::string& status) {
  EngineStats st = s.stats();
  std::ostringstream out;
  out << "engine=" << s.name() << " solutions=" << solutions
      << " derefs=" << st.derefs << " documents=" << st.documents
      << " tasks=" << st.tasks << " rounds=" << st.rounds
      << " partials=" << st.partials << " status=" << status;
  return out.str();
}

int DoRun(const RunFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.order.empty() && f.engine != "iterator") {
    throw UsageError("--order only applies to the iterator engine");
  }
  QuerySpec q = f.Spec();
  auto web = LoadWeb(f.web);

  Budget b;
  b.max_derefs = f.max_derefs;
  b.max_tasks = f.max_tasks;
  b.max_solutions = f.max_solutions;
  b.max_rounds = f.max_rounds;

  EngineOptions opts;
  try {
    opts.policy = TaskPolicy::FromName(f.policy);
  } catch (const InvalidValue& e) {
    throw UsageError(e.what());
  }
  opts.expansion = f.expansion == "valuation" ? Expansion::kValuation
                                              : Expansion::kMatchedTriple;
  if (f.trace) opts.trace = [&err](const std::string& line) { err << line << "\n"; };

  std::unique_ptr<SolutionStream> stream;
  try {
    if (f.engine == "oracle") {
      stream = MakeOracleStream(*web, q, b);
    } else if (f.engine == "machine") {
      stream = MakeMachineStream(*web, q, b, opts);
    } else if (f.engine == "ltb") {
      stream = MakeLtbStream(*web, q, b, opts);
    } else {
      std::vector<std::size_t> order;
      if (!f.order.empty()) order = ParseOrder(f.order, q.pattern.size());
      stream = MakeIteratorStream(*web, q, order, b, opts);
    }
  } catch (const BudgetRequired& e) {
    throw UsageError(e.what());
  } catch (const UnsupportedCriterion& e) {
    throw UsageError(e.what());
  } catch (const InvalidValue& e) {
    throw UsageError(e.what());
  }
  std::size_t count = 0;
  while (true) {
    StreamItem item = stream->Next();
    if (auto* mu = std::get_if<Valuation>(&item)) {
      ++count;
      out << (f.format == "ldres" ? EncodeValuation(*mu) : mu->ToString())
          << "\n"
          << std::flush;
      continue;
    }
    if (auto* stop = std::get_if<BudgetStop>(&item)) {
      err << StatsLine(*stream, count, "budget-stop(" + stop->reason + ")")
          << "\n";
      return kBudgetStop;
    }
    err << StatsLine(*stream, count, "exhausted") << "\n";
    return kOk;
  }
}

int DoReach(const QueryFlags& f, std::ostream& out, std::ostream&) {
  QuerySpec q = f.Spec();
  auto web = LoadWeb(f.web);
  ReachableReport r;
  try {
    r = ReachablePart(*web, q, f.max_derefs);
  } catch (const BudgetRequired& e) {
    throw UsageError(e.what());
  }
  for (const auto& d : r.documents) out << d.value() << "\n";
  out << "triples: " << r.data.size() << "\n";
  out << "complete: " << (r.complete ? "true" : "false") << "\n";
  return r.complete ? kOk : kBudgetStop;
}

std::string Serialize(const Web& w, const std::string& path) {
  return EndsWith(path, ".ldweb") ? EncodeWeb(w) + "\n" : WriteFixture(w);
}

int DoGen(std::uint64_t max, const std::string& output, std::ostream& out) {
  if (max == 0) throw UsageError("--max must be positive");
  NumberWeb w(max);
  std::string text = Serialize(w, output);
  if (output.empty() || output == "-") {
    out << text;
  } else {
    WriteFile(output, text);
  }
  return kOk;
}

int DoConvert(const std::string& in, const std::string& output) {
  auto web = LoadWeb(in);
  if (!web->IsFinite()) throw UsageError("can only convert finite webs");
  WriteFile(output, Serialize(*web, output));
  return kOk;
}

int DoServe(const std::string& web_spec, const std::string& listen,
            std::ostream& out) {
  Address addr;
  try {
    addr = Address::Parse(listen);
  } catch (const InvalidValue& e) {
    throw UsageError(e.what());
  }
  if (web_spec.starts_with("tcp://")) {
    throw UsageError("serve needs a local web");
  }
  auto web = LoadWeb(web_spec);

  // Worker threads inherit the mask, so only sigwait sees the signals.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  WebServer server(*web, addr);
  out << "listening on " << addr.host << ":" << server.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.Stop();
  return kOk;
}

}  // namespace

int RunCli(std::vector<std::string> args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Conjunctive Linked Data queries over traversable webs", "ldq"};
  app.require_subcommand(1);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a query");
  run.Register(run_cmd);

  QueryFlags reach;
  CLI::App* reach_cmd =
      app.add_subcommand("reach", "compute the reachable part");
  reach.Register(reach_cmd);

  std::uint64_t gen_max = 0;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a web");
  CLI::App* gen_numbers =
      gen_cmd->add_subcommand("numbers", "the number web up to --max");
  gen_cmd->require_subcommand(1);
  gen_numbers->add_option("--max", gen_max, "largest number")->required();
  gen_numbers->add_option("-o,--output", gen_out,
                          "output file (.ldweb or fixture); default stdout");

  std::string serve_web;
  std::string serve_listen = "127.0.0.1:7070";
  CLI::App* serve_cmd = app.add_subcommand("serve", "serve a web over TCP");
  serve_cmd->add_option("--web", serve_web)->required();
  serve_cmd->add_option("--listen", serve_listen, "host:port");

  std::string conv_in, conv_out;
  CLI::App* convert_cmd =
      app.add_subcommand("convert", "convert between fixture and .ldweb");
  convert_cmd->add_option("--in", conv_in)->required();
  convert_cmd->add_option("--out", conv_out)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return DoRun(run, out, err);
    if (*reach_cmd) return DoReach(reach, out, err);
    if (*gen_cmd) return DoGen(gen_max, gen_out, out);
    if (*serve_cmd) return DoServe(serve_web, serve_listen, out);
    if (*convert_cmd) return DoConvert(conv_in, conv_out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << "\n";
    return kTransport;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace ldq::cli
