#include <doctest.h>

#include <cstring>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "vchunk/dedup.hpp"
#include "vchunk/errors.hpp"
#include "vchunk/fingerprint.hpp"
#include "vchunk/pipeline.hpp"

using namespace vchunk;

namespace {

ByteSpan text(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

std::vector<std::uint8_t> counting(std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(i);
  return v;
}

std::vector<PipelineInput> memory_inputs(const std::vector<std::vector<std::uint8_t>>& files) {
  std::vector<PipelineInput> out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    out.push_back({"file" + std::to_string(i), [&files, i] { return files[i]; }});
  }
  return out;
}

}  // namespace

TEST_SUITE("dedup") {

TEST_CASE("murmur3 x64 128 known answers") {
  // Reference digests from the canonical implementation (hash_bytes order).
  struct Kat {
    std::vector<std::uint8_t> input;
    std::uint32_t seed;
    const char* hex;
  };
  const std::string fox = "The quick brown fox jumps over the lazy dog";
  std::vector<std::uint8_t> ramp3;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 256; ++i) ramp3.push_back(static_cast<std::uint8_t>(i));
  }
  const std::vector<Kat> kats = {
      {{}, 0, "00000000000000000000000000000000"},
      {{}, 0x9747b28c, "b3bbaa1d8a202b397a9502e38f60b093"},
      {{'h', 'e', 'l', 'l', 'o'}, 0, "029bbd41b3a7d8cb191dae486a901e5b"},
      {{'h', 'e', 'l', 'l', 'o'}, 0x9747b28c, "2e1a076f85d6238c83cbc1b34655902a"},
      {{fox.begin(), fox.end()}, 0, "6c1b07bc7bbc4be347939ac4a93c437a"},
      {{fox.begin(), fox.end()}, 0x9747b28c, "213163d23b7f8a73e516c07e727345f9"},
      {ramp3, 0, "b626b903306c92cf3846f3e2e5d953fa"},
      {ramp3, 0x9747b28c, "dd119380e5eab8ffb345487b61a29fc3"},
      {{}, kFingerprintSeed, "7916292d5eae70cafdde8be680c7892e"},
      {{'a'}, kFingerprintSeed, "d4937caa35babf6fa9aa59e3b434858a"},
      {{'h', 'e', 'l', 'l', 'o'}, kFingerprintSeed, "e7ba153e057ca037b5fdb82f8be7e258"},
      {counting(17), kFingerprintSeed, "a78ea57d222848dff8f08bc9bd93b139"},
      {ramp3, kFingerprintSeed, "ab205c4c722654a8c0bcc1881abeaac7"},
  };
  for (const auto& k : kats) {
    CAPTURE(k.input.size());
    CAPTURE(k.seed);
    CHECK(murmur3_x64_128(k.input, k.seed).hex() == k.hex);
  }
}

TEST_CASE("fingerprint rejects an empty chunk") {
  CHECK_THROWS_AS(fingerprint_chunk(ByteSpan{}), std::invalid_argument);
  CHECK(fingerprint_chunk(text("abc")) == fingerprint_chunk(text("abc")));
}

TEST_CASE("hex round trip") {
  const auto fp = fingerprint_chunk(text("round trip"));
  CHECK(Fingerprint::from_hex(fp.hex()) == fp);
  CHECK_FALSE(Fingerprint::from_hex("xyz").has_value());
  CHECK_FALSE(Fingerprint::from_hex(std::string(32, 'G')).has_value());
}

TEST_CASE("one-byte differences never collide over a million seeded pairs") {
  std::mt19937_64 rng(2024);
  std::vector<std::uint8_t> buf(64);
  std::size_t collisions = 0;
  for (int i = 0; i < 1000000; ++i) {
    for (std::size_t j = 0; j < buf.size(); j += 8) {
      const std::uint64_t v = rng();
      std::memcpy(buf.data() + j, &v, 8);
    }
    const std::size_t len = 1 + rng() % buf.size();
    const auto a = fingerprint_chunk(ByteSpan(buf.data(), len));
    buf[rng() % len] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    const auto b = fingerprint_chunk(ByteSpan(buf.data(), len));
    collisions += a == b ? 1 : 0;
  }
  CHECK(collisions == 0);
}

TEST_CASE("index counts references and unique bytes") {
  FingerprintIndex index;
  const auto a = fingerprint_chunk(text("aaaa"));
  const auto b = fingerprint_chunk(text("bbbbbb"));
  CHECK(index.insert(a, 4));
  CHECK_FALSE(index.insert(a, 4));
  CHECK(index.insert(b, 6));
  CHECK(index.size() == 2);
  CHECK(index.unique_bytes() == 10);
  CHECK(index.lookup(a) == IndexEntry{4, 2});
  CHECK(index.lookup(b) == IndexEntry{6, 1});
  CHECK_FALSE(index.lookup(fingerprint_chunk(text("c"))).has_value());
}

TEST_CASE("index snapshot is sorted and round-trips") {
  testing::TempDir dir;
  FingerprintIndex index;
  for (int i = 0; i < 500; ++i) {
    const std::string s = "chunk" + std::to_string(i % 300);
    index.insert(fingerprint_chunk(text(s)), s.size());
  }
  std::ostringstream snap;
  index.write_snapshot(snap);
  std::istringstream lines(snap.str());
  std::string line;
  std::string prev;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const std::string key = line.substr(0, 32);
    CHECK(prev < key);
    prev = key;
    ++count;
  }
  CHECK(count == 300);
  CHECK(snapshot_bytes(index) == snap.str().size());

  index.save(dir / "index.csv");
  FingerprintIndex loaded;
  loaded.load(dir / "index.csv");
  CHECK(loaded.sorted_entries() == index.sorted_entries());

  testing::write_file(dir / "bad.csv", {'x', ',', '1', '\n'});
  FingerprintIndex bad;
  CHECK_THROWS_AS(bad.load(dir / "bad.csv"), IoError);
}

TEST_CASE("index tolerates concurrent inserts") {
  FingerprintIndex index;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&index] {
      for (int i = 0; i < 5000; ++i) {
        const std::string s = std::to_string(i);
        index.insert(fingerprint_chunk(text(s)), s.size());
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(index.size() == 5000);
  for (const auto& [fp, entry] : index.sorted_entries()) REQUIRE(entry.refs == 4);
}

TEST_CASE("directory store layout and round trip") {
  testing::TempDir dir;
  DirectoryChunkStore store(dir / "chunks");
  const auto data = oracle::random_bytes(1000, 3);
  const auto fp = fingerprint_chunk(data);
  CHECK_FALSE(store.contains(fp));
  store.put(fp, data);
  store.put(fp, data);
  const std::string hex = fp.hex();
  CHECK(store.path_for(fp) == dir / "chunks" / hex.substr(0, 2) / hex.substr(2, 2) / (hex + ".chunk"));
  CHECK(std::filesystem::file_size(store.path_for(fp)) == 1000);
  CHECK(store.get(fp) == data);
  CHECK_FALSE(store.get(fingerprint_chunk(text("absent"))).has_value());
}

TEST_CASE("recipe text round trip") {
  FileRecipe r;
  r.source_path = "dir/with,comma.bin";
  r.chunks = {{fingerprint_chunk(text("one")), 3}, {fingerprint_chunk(text("three")), 5}};
  r.size = 8;
  const std::string s = r.serialize();
  CHECK(s.starts_with("recipe,8,dir/with,comma.bin\n"));
  std::istringstream in(s);
  CHECK(FileRecipe::parse(in) == r);

  std::istringstream mismatch("recipe,9,x\n" + r.chunks[0].fingerprint.hex() + ",3\n");
  CHECK_THROWS_AS(FileRecipe::parse(mismatch), IoError);
  std::istringstream garbage("recipe,3,x\nnot-a-digest,3\n");
  CHECK_THROWS_AS(FileRecipe::parse(garbage), IoError);
}

TEST_CASE("store then reconstruct is the identity") {
  const auto data = oracle::random_bytes(300000, 9);
  for (auto algo : all_algorithms()) {
    const auto cfg = ChunkerConfig::defaults(algo, 4096);
    FingerprintIndex index;
    MemoryChunkStore store;
    FileRecipe recipe;
    dedup_stream(chunk_buffer(data, cfg), data, index, &store, &recipe);
    CHECK(recipe.size == data.size());
    CHECK(reconstruct_file(recipe, store) == data);
  }
}

TEST_CASE("missing fingerprint names the digest and recipe position") {
  const auto data = oracle::random_bytes(50000, 10);
  const auto cfg = ChunkerConfig::defaults(Algorithm::gear, 4096);
  FingerprintIndex index;
  MemoryChunkStore store;
  FileRecipe recipe;
  dedup_stream(chunk_buffer(data, cfg), data, index, &store, &recipe);
  REQUIRE(recipe.chunks.size() > 3);
  store.erase(recipe.chunks[2].fingerprint);
  try {
    reconstruct_file(recipe, store);
    FAIL("expected a missing-fingerprint error");
  } catch (const MissingFingerprintError& e) {
    CHECK(e.fingerprint() == recipe.chunks[2].fingerprint.hex());
    CHECK(e.position() == 2);
    CHECK(std::string(e.what()).find(e.fingerprint()) != std::string::npos);
  }
}

TEST_CASE("second pass over the same file is entirely duplicate") {
  const auto data = oracle::random_bytes(400000, 11);
  const auto cfg = ChunkerConfig::defaults(Algorithm::ram, 4096);
  const auto bs = chunk_buffer(data, cfg);
  FingerprintIndex index;
  const auto first = dedup_stream(bs, data, index);
  const auto second = dedup_stream(bs, data, index);
  CHECK(first.duplicate_bytes == 0);
  CHECK(second.duplicate_bytes == data.size());
  CHECK(second.unique_bytes == 0);
}

TEST_CASE("concatenated copy resynchronises within a few chunks") {
  // Boundaries that depend on the chunk start (min-size skipping, start-anchored
  // windows) need a few chunks after the junction to fall back into phase.
  const auto x = oracle::random_bytes(500000, 12);
  std::vector<std::uint8_t> xx = x;
  xx.insert(xx.end(), x.begin(), x.end());
  const std::pair<Algorithm, std::size_t> cases[] = {{Algorithm::rabin, 0},  {Algorithm::gear, 0},
                                                     {Algorithm::fastcdc, 0}, {Algorithm::ae_min, 712},
                                                     {Algorithm::ae_max, 709}, {Algorithm::maxp, 365}};
  for (const auto& [algo, window] : cases) {
    auto cfg = ChunkerConfig::defaults(algo, 4096);
    if (window != 0) cfg.window = cfg.half_window = window;
    FingerprintIndex index;
    const auto counts = dedup_stream(chunk_buffer(xx, cfg), xx, index);
    CAPTURE(to_string(algo));
    CHECK(counts.duplicate_bytes + 4 * cfg.max_size >= x.size());
    CHECK(counts.unique_bytes + counts.duplicate_bytes == counts.total_bytes);
  }
}

TEST_CASE("ram keeps a phase offset between copies") {
  // RAM's window starts at the chunk start, so a phase offset between the two
  // copies drifts like a random walk and may never close. Only conservation
  // is guaranteed here.
  const auto x = oracle::random_bytes(500000, 12);
  std::vector<std::uint8_t> xx = x;
  xx.insert(xx.end(), x.begin(), x.end());
  FingerprintIndex index;
  const auto counts = dedup_stream(chunk_buffer(xx, ChunkerConfig::defaults(Algorithm::ram, 4096)), xx, index);
  CHECK(counts.unique_bytes + counts.duplicate_bytes == xx.size());
}

TEST_CASE("disjoint random files share no chunks") {
  const auto a = oracle::random_bytes(1 << 20, 13);
  const auto b = oracle::random_bytes(1 << 20, 14);
  for (auto algo : all_algorithms()) {
    const auto cfg = ChunkerConfig::defaults(algo, 4096);
    FingerprintIndex index;
    dedup_stream(chunk_buffer(a, cfg), a, index);
    const auto counts = dedup_stream(chunk_buffer(b, cfg), b, index);
    CHECK(counts.duplicate_chunks == 0);
  }
}

TEST_CASE("space savings") {
  CHECK(space_savings(100, 100) == doctest::Approx(0.0));
  CHECK(space_savings(200, 100) == doctest::Approx(50.0));
  CHECK_THROWS_WITH_AS(space_savings(0, 0), "empty corpus", std::invalid_argument);
  CHECK_THROWS_AS(space_savings(10, 11), std::invalid_argument);
}

TEST_CASE("dedup_stream rejects boundaries that do not partition the data") {
  const auto data = oracle::random_bytes(100, 15);
  FingerprintIndex index;
  const std::vector<Boundary> short_list = {{49, BoundaryReason::content}};
  CHECK_THROWS_AS(dedup_stream(short_list, data, index), std::invalid_argument);
}

TEST_CASE("pipeline: worker count does not change the outcome") {
  std::vector<std::vector<std::uint8_t>> files;
  for (int i = 0; i < 12; ++i) files.push_back(oracle::random_bytes(100000 + 1000 * i, 100 + i % 5));
  PipelineOptions opt;
  opt.chunker = ChunkerConfig::defaults(Algorithm::maxp, 2048, detect_engines().front());
  opt.verify = true;
  FingerprintIndex i1;
  const auto r1 = run_pipeline(memory_inputs(files), opt, i1);
  opt.workers = 4;
  FingerprintIndex i4;
  const auto r4 = run_pipeline(memory_inputs(files), opt, i4);
  CHECK(r1.verified);
  CHECK(r4.verified);
  CHECK(i1.sorted_entries() == i4.sorted_entries());
  CHECK(r1.counts.total_bytes == r4.counts.total_bytes);
  CHECK(r1.counts.chunks == r4.counts.chunks);
  CHECK(r1.all_chunk_sizes() == r4.all_chunk_sizes());
  CHECK(r1.counters.bytes_ebs == r4.counters.bytes_ebs);
  CHECK(i1.unique_bytes() < r1.counts.total_bytes);
}

TEST_CASE("pipeline: fingerprinting disabled takes no fingerprint time") {
  std::vector<std::vector<std::uint8_t>> files = {oracle::random_bytes(200000, 1)};
  PipelineOptions opt;
  opt.chunker = ChunkerConfig::defaults(Algorithm::ram, 4096);
  opt.fingerprint = false;
  FingerprintIndex index;
  const auto r = run_pipeline(memory_inputs(files), opt, index);
  CHECK(r.phases.fingerprinting_seconds == 0.0);
  CHECK(r.phases.chunking_seconds > 0.0);
  CHECK(index.size() == 0);
}

TEST_CASE("pipeline: corrupted store fails verification naming the file") {
  testing::TempDir dir;
  std::vector<std::vector<std::uint8_t>> files = {oracle::random_bytes(100000, 2), oracle::random_bytes(100000, 3)};
  DirectoryChunkStore store(dir / "chunks");
  PipelineOptions opt;
  opt.chunker = ChunkerConfig::defaults(Algorithm::fastcdc, 4096);
  opt.store = &store;
  {
    FingerprintIndex index;
    const auto r = run_pipeline(memory_inputs(files), opt, index);
    // Damage a chunk of the second file; put() never overwrites an existing chunk.
    const auto victim = store.path_for(r.files[1].recipe->chunks[1].fingerprint);
    testing::write_file(victim, {1, 2, 3});
  }
  opt.verify = true;
  FingerprintIndex index;
  try {
    run_pipeline(memory_inputs(files), opt, index);
    FAIL("expected verification failure");
  } catch (const VerificationError& e) {
    CHECK(std::string(e.what()).find("file1") != std::string::npos);
  }
}

TEST_CASE("adding a duplicate file never lowers savings") {
  std::vector<std::vector<std::uint8_t>> files = {oracle::random_bytes(300000, 4), oracle::random_bytes(200000, 5)};
  PipelineOptions opt;
  opt.chunker = ChunkerConfig::defaults(Algorithm::ae_max, 2048);
  opt.chunker.window = 400;
  double prev = -1;
  for (int copies = 0; copies < 3; ++copies) {
    FingerprintIndex index;
    const auto r = run_pipeline(memory_inputs(files), opt, index);
    const double s = space_savings(r.counts.total_bytes, index.unique_bytes());
    CHECK(s >= prev);
    prev = s;
    files.push_back(files[0]);
  }
}

}  // TEST_SUITE
