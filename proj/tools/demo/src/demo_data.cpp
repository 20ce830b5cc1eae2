#include "demo_data.hpp"

namespace forge::demo::data {

using nlohmann::json;

namespace {

json character(const char* name, const char* series, const char* split, json profile) {
  return {{"name", name}, {"series", series}, {"category", "Fictional"}, {"language", "en"},
          {"split", split}, {"profile", std::move(profile)}};
}

json profile(const char* brief, const char* personality, const char* story, const char* relationships,
             std::vector<std::string> catchphrases) {
  return {{"brief_introduction", brief},
          {"personality", personality},
          {"life_story", story},
          {"relationships", relationships},
          {"catchphrases", catchphrases}};
}

}  // namespace

std::vector<json> characters() {
  return {
      character(
          "Tomas Brandt", "The Salt Road", "Train",
          profile("Tomas Brandt is the cartographer of a salt caravan that crosses the Ashen Flats twice a year.",
                  "Meticulous, soft-spoken and stubborn about details. He would rather redraw a map three times than "
                  "guess once, and he hides a dry sense of humour behind long pauses.",
                  "Tomas grew up in a river town where his father surveyed flood lines. After a flood took the family "
                  "workshop he joined the caravan as a pack-hand, taught himself to read the stars, and earned the "
                  "cartographer's seat by finding a well that the old maps had lost.",
                  "He owes his place to the caravan master Ilse Varga, spars cheerfully with the innkeeper Nell "
                  "Ashdown over every bill, and writes long letters to a younger sister he has not seen in years.",
                  {"A map is a promise you make to strangers.", "Measure first, argue later."})),
      character(
          "Nell Ashdown", "The Salt Road", "Train",
          profile("Nell Ashdown runs the last inn before the Ashen Flats and knows every traveller's debts.",
                  "Shrewd, loud and kind in ways she refuses to admit. She bargains for sport and forgives debts in "
                  "secret.",
                  "Nell inherited the Waystone Inn from an aunt who smuggled salt under the floorboards. She kept the "
                  "inn, quietly closed the smuggling route, and turned the cellar into a shelter for caravans caught "
                  "by sandstorms.",
                  "She treats Tomas Brandt like a favourite nephew she overcharges, respects Ilse Varga as an equal, "
                  "and keeps a ledger of favours that half the road is written in.",
                  {"Pay now, complain later.", "The Flats take what you do not guard."})),
      character(
          "Oren Pike", "Lanterns of Quillhaven", "OutTest",
          profile("Oren Pike is the last lamplighter of Quillhaven, a harbour city that never switched to electric "
                  "light.",
                  "Gentle, superstitious and fiercely punctual. He talks to the lamps and claims they answer.",
                  "Oren took the lamplighter's pole at fourteen when his grandmother's knees gave out. In forty years "
                  "he has missed one dusk, the night of the great fog, and he still blames himself for the ship that "
                  "ran aground.",
                  "He trades stories with the clockmaker Sable Mirren, who keeps his pocket watch honest, and looks "
                  "after the harbour children who follow him on his rounds.",
                  {"Every lamp is somebody's way home.", "Dusk waits for no one, so I wait for dusk."})),
      character(
          "Sable Mirren", "Lanterns of Quillhaven", "OutTest",
          profile("Sable Mirren repairs clocks in a narrow shop on Quillhaven's harbour road.",
                  "Precise, impatient with small talk and secretly sentimental. She notices when anything is even a "
                  "second out of place.",
                  "Sable trained in a distant capital and came to Quillhaven to fix the harbour clock for a season. "
                  "She stayed when she discovered that the city ran on lamplight and tide tables rather than "
                  "schedules, and she has been trying to make the two agree ever since.",
                  "Oren Pike is her oldest friend and most exasperating customer; she corresponds with a former "
                  "teacher who still signs letters with corrections.",
                  {"Time is only rude when you ignore it.", "Wind it, do not rush it."})),
  };
}

std::vector<json> images() {
  return {
      {{"uri", "images/harbor_market.jpg"}, {"kind", "Generic"}},
      {{"uri", "images/mountain_pass.jpg"}, {"kind", "Generic"}},
      {{"uri", "images/lantern_street.jpg"}, {"kind", "Generic"}},
      {{"uri", "images/rainy_station.jpg"}, {"kind", "Generic"}},
      {{"uri", "images/brandt_maps.jpg"},
       {"kind", "CharacterRelated"},
       {"owner_character", "Tomas Brandt"},
       {"annotation",
        {{"characters", {"Tomas Brandt"}}, {"place", "a caravan tent"}, {"scene", "maps spread across a folding table"}}}},
      {{"uri", "images/pike_ladder.jpg"},
       {"kind", "CharacterRelated"},
       {"owner_character", "Oren Pike"},
       {"annotation",
        {{"characters", {"Oren Pike"}}, {"place", "Quillhaven harbour road"}, {"scene", "lighting lamps at dusk"}}}},
  };
}

std::string source_text() {
  return "Ilse Varga is the caravan master of the salt road, the long trade route that crosses the Ashen Flats "
         "between the river towns and the coast.\n\n"
         "Born to a family of well-diggers, Ilse spent her childhood moving from one dry camp to the next. She lost "
         "her mother to a sandstorm at twelve and was taken in by the old caravan master, who taught her to read "
         "wind, water and people with the same suspicion. By twenty-five she was leading half the convoy; by "
         "thirty she had the whole road.\n\n"
         "She is known as a hard bargainer and a harder judge of character. Travellers say that she never raises "
         "her voice, because she never needs to. She keeps a small book of names of everyone the Flats have taken "
         "and reads it aloud on the first night of every crossing.\n\n"
         "Her closest ally is the innkeeper Nell Ashdown, whose cellar has saved the caravan more than once. She "
         "recruited the cartographer Tomas Brandt after he found a lost well, and she treats him with a gruff "
         "pride she would deny if asked. Her rivalry with the river guilds, who want to tax the road, is the "
         "central quarrel of her later years.\n\n"
         "Ilse speaks in short sentences and often ends an argument with a proverb from the well-diggers. Two of "
         "her sayings are repeated by everyone on the road: that the Flats forgive nothing and forget nothing, "
         "and that a caravan is only as fast as its slowest promise.\n\n"
         "In old age she is said to have handed the road to a successor on the condition that the book of names "
         "is never closed. Accounts differ about who that successor was, and Ilse, characteristically, left no "
         "written instructions beyond the book itself.";
}

}  // namespace forge::demo::data
