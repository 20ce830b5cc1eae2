#include "forge/domain/ids.hpp"

#include "forge/domain/codec.hpp"
#include "forge/util/hash.hpp"

namespace forge {

std::string compute_id(const Character& c) {
  return content_id("ch", json{{"name", c.name},
                               {"series", c.series},
                               {"category", to_string(c.category)},
                               {"language", to_string(c.language)}});
}

std::string compute_id(const ImageRecord& image) {
  json content = to_json(image);
  content.erase("id");
  return content_id("img", content);
}

std::string compute_id(const Dialogue& d) {
  json content = to_json(d);
  content.erase("id");
  return content_id("dlg", content);
}

std::string compute_training_sample_id(const std::string& dialogue_id, const std::string& role, int turn_index) {
  return content_id("trs", json{{"dialogue", dialogue_id}, {"role", role}, {"turn", turn_index}});
}

std::string compute_test_sample_id(const std::string& dialogue_id, const std::string& role, int turn_index,
                                   std::uint64_t seed) {
  return content_id("tst", json{{"dialogue", dialogue_id}, {"role", role}, {"turn", turn_index}, {"seed", seed}});
}

Character with_id(Character c) {
  c.id = compute_id(c);
  return c;
}

ImageRecord with_id(ImageRecord image) {
  image.id = compute_id(image);
  return image;
}

Dialogue with_id(Dialogue d) {
  d.id = compute_id(d);
  return d;
}

}  // namespace forge
