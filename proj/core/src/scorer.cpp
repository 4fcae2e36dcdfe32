#include "lotto/scorer.hpp"

#include "lotto/errors.hpp"

namespace lotto {

ProbVector PriorCache::GetOrCompute(const std::string& task, std::size_t space_index,
                                    const std::function<ProbVector()>& compute) {
  std::promise<ProbVector> promise;
  {
    std::unique_lock lock(mutex_);
    const Key key{task, space_index};
    if (auto it = slots_.find(key); it != slots_.end()) {
      ++hits_;
      std::shared_future<ProbVector> pending = it->second;
      lock.unlock();
      return pending.get();
    }
    slots_.emplace(key, promise.get_future().share());
  }
  try {
    ProbVector q = compute();
    promise.set_value(q);
    std::lock_guard lock(mutex_);
    ++computed_;
    return q;
  } catch (...) {
    promise.set_exception(std::current_exception());
    // Let a later caller retry instead of caching the failure.
    std::lock_guard lock(mutex_);
    slots_.erase(Key{task, space_index});
    throw;
  }
}

void PriorCache::Insert(const std::string& task, std::size_t space_index, ProbVector q) {
  std::lock_guard lock(mutex_);
  const Key key{task, space_index};
  if (slots_.contains(key)) return;
  std::promise<ProbVector> ready;
  ready.set_value(std::move(q));
  slots_.emplace(key, ready.get_future().share());
}

std::optional<ProbVector> PriorCache::Find(const std::string& task, std::size_t space_index) const {
  std::shared_future<ProbVector> slot;
  {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(Key{task, space_index});
    if (it == slots_.end()) return std::nullopt;
    slot = it->second;
  }
  if (slot.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return std::nullopt;
  return slot.get();
}

std::vector<PriorCache::Entry> PriorCache::Entries() const {
  std::vector<Entry> out;
  std::lock_guard lock(mutex_);
  for (const auto& [key, slot] : slots_) {
    if (slot.wait_for(std::chrono::seconds(0)) != std::future_status::ready) continue;
    out.push_back({key.first, key.second, slot.get()});
  }
  return out;
}

std::size_t PriorCache::computed() const {
  std::lock_guard lock(mutex_);
  return computed_;
}

std::size_t PriorCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t PriorCache::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

Scorer::Scorer(BackendClient& client, const TaskSpec& task, const PromptSpace& space, PriorCache& priors)
    : client_(client), task_(task), space_(space), priors_(priors) {
  task_.Validate();
  if (!client_.backend().supports(task_.model_style)) {
    throw Error(ErrorCode::kInvalidArgument, "backend '" + client_.backend().info().identity +
                                                 "' does not serve model_style " +
                                                 std::string(ToString(task_.model_style)));
  }
}

ProbVector Scorer::prior(const PromptTemplate& tpl) {
  return priors_.GetOrCompute(task_.name, tpl.space_index, [&] {
    const std::string text = render_empty(tpl, task_, space_.lexicon());
    return client_.raw_distributions(task_.model_style, task_.verbalizer, std::span<const std::string>(&text, 1))
        .front();
  });
}

CalibratedDistribution Scorer::distribution(const Instance& instance, const PromptTemplate& tpl) {
  return std::move(distributions(std::span<const Instance>(&instance, 1), tpl).front());
}

std::vector<CalibratedDistribution> Scorer::distributions(std::span<const Instance> instances,
                                                          const PromptTemplate& tpl) {
  ProbVector q = prior(tpl);
  std::vector<std::string> texts;
  texts.reserve(instances.size());
  for (const auto& instance : instances) texts.push_back(render(instance, tpl, task_, space_.lexicon()));
  std::vector<ProbVector> raw = client_.raw_distributions(task_.model_style, task_.verbalizer, texts);
  std::vector<CalibratedDistribution> out;
  out.reserve(raw.size());
  for (auto& o : raw) {
    ProbVector p = calibrate(o, q);
    out.push_back({std::move(o), q, std::move(p)});
  }
  return out;
}

std::vector<std::size_t> Scorer::predictions(std::span<const Instance> instances, const PromptTemplate& tpl) {
  std::vector<std::size_t> out;
  out.reserve(instances.size());
  for (const auto& d : distributions(instances, tpl)) out.push_back(predict(d.p));
  return out;
}

}  // namespace lotto
