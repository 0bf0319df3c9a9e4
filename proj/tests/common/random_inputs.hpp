#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tta/env/buttons.hpp"

namespace tta::testing {

/// Input scripts that mix uniform button noise with held directions and
/// motion-plus-button sequences, so specials, jumps and blocks all occur.
class InputScript {
 public:
  explicit InputScript(std::uint64_t seed) : rng_(seed) {}

  env::ButtonVector next() {
    if (queue_.empty()) refill();
    const auto b = queue_.back();
    queue_.pop_back();
    return b;
  }

 private:
  void refill() {
    using env::Button;
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> any(0, 0x0FFF);
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_int_distribution<int> attack(static_cast<int>(Button::LP),
                                              static_cast<int>(Button::HK));
    std::bernoulli_distribution coin(0.5);
    std::vector<env::ButtonVector> seq;
    switch (kind(rng_)) {
      case 0:
      case 1:
        seq.push_back(env::ButtonVector::from_mask(static_cast<std::uint16_t>(any(rng_))));
        break;
      case 2: {  // hold a direction
        env::ButtonVector b;
        b.set(coin(rng_) ? Button::Left : Button::Right);
        if (coin(rng_)) b.set(coin(rng_) ? Button::Up : Button::Down);
        for (int i = len(rng_); i > 0; --i) seq.push_back(b);
        break;
      }
      case 3: {  // quarter or half circle toward a random side, then a button
        const Button toward = coin(rng_) ? Button::Right : Button::Left;
        const Button away = toward == Button::Right ? Button::Left : Button::Right;
        env::ButtonVector d, df, f;
        d.set(Button::Down);
        df.set(Button::Down);
        df.set(toward);
        f.set(toward);
        if (coin(rng_)) {
          env::ButtonVector back;
          back.set(away);
          seq.push_back(back);
        }
        seq.push_back(d);
        seq.push_back(df);
        auto fire = f;
        fire.set(static_cast<Button>(attack(rng_)));
        seq.push_back(fire);
        break;
      }
      case 4: {  // charge back then forward with a button
        const Button toward = coin(rng_) ? Button::Right : Button::Left;
        const Button away = toward == Button::Right ? Button::Left : Button::Right;
        env::ButtonVector back, fire;
        back.set(away);
        for (int i = 0; i < 13; ++i) seq.push_back(back);
        fire.set(toward);
        fire.set(static_cast<Button>(attack(rng_)));
        seq.push_back(fire);
        break;
      }
      default:
        for (int i = len(rng_); i > 0; --i) seq.push_back(env::ButtonVector{});
        break;
    }
    queue_.assign(seq.rbegin(), seq.rend());
  }

  std::mt19937_64 rng_;
  std::vector<env::ButtonVector> queue_;
};

}  // namespace tta::testing
