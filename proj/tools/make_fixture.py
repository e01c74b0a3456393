# Copyright 2026 The qstance Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the bundled 50-article test fixture.

The articles are synthetic French news items built from templates, so every
question's stance, form and answer are known by construction. Two annotators
("A" and "B") code every article; B departs from A on a fixed share of units
so the agreement numbers are non-trivial.

Usage: python3 tools/make_fixture.py tests/data/fixture
"""

import json
import random
import sys
from pathlib import Path

SEED = 2026

LOCAL = ["arcinfo.ch", "lacote.ch", "lenouvelliste.ch", "ladepeche.fr", "lindependant.fr",
         "midilibre.fr"]
NATIONAL = ["francetvinfo.fr", "lefigaro.fr", "la-croix.com", "lapresse.ca", "rtl.be",
            "watson.ch", "tf1info.fr", "seneweb.com", "lequipe.fr"]

CITIES = ["Sion", "Lausanne", "Genève", "Neuchâtel", "Fribourg", "Toulouse", "Marseille",
          "Lyon", "Montréal", "Bruxelles", "Dakar", "Paris"]
GROUPS = ["habitants", "agriculteurs", "riverains", "familles", "enseignants", "commerçants",
          "retraités", "médecins", "locataires", "parents"]

# topic_id -> (meta-topic, things the topic talks about)
TOPICS = {
    0: ("national/local politics", ["budget communal", "projet de loi", "référendum", "plan de mandature"]),
    1: ("geopolitics", ["conseil municipal", "programme électoral", "remaniement", "vote du budget"]),
    2: ("local news", ["chantier du tram", "plan de relance", "marché couvert", "prix du loyer"]),
    3: ("business/economy", ["taux directeur", "salaire minimum", "accord commercial", "tarif de l'énergie"]),
    4: ("faits divers", ["nouvel hôpital", "service de garde", "réseau de bus", "centre culturel"]),
    5: ("lifestyle/entertainment", ["collège du quartier", "plan canicule", "logement social", "fermeture de l'école"]),
    6: ("professional sports", ["nouveau stade", "transfert du capitaine", "calendrier du championnat",
                   "centre de formation"]),
    7: ("technology", ["parc éolien", "plan climat", "réseau de chaleur", "barrage hydraulique"]),
}

# Question templates per stance: (template, form, macro axis). Placeholders:
# {thing} {city} {group}.
QUESTIONS = {
    "information-seeking": [
        ("Combien coûtera le {thing} de {city} ?", "wh", "Framing/agenda-setting"),
        ("Quand les {group} de {city} seront-ils consultés sur le {thing} ?", "wh",
         "Framing/agenda-setting"),
        ("Pourquoi le {thing} a-t-il pris autant de retard ?", "wh", "Authority positioning"),
        ("Qui financera le {thing} de {city} ?", "wh", "Authority positioning"),
        ("Que répond la SNCF aux {group} de {city} ?", "wh", "Authority positioning"),
    ],
    "rhetorical": [
        ("Qui peut encore croire aux promesses des élus ?", "wh", "Stance/alignment"),
        ("À quoi bon débattre si rien ne change pour les {group} ?", "wh",
         "Discursive strategy"),
        ("Faut-il vraiment attendre une nouvelle crise pour agir ?", "polar",
         "Stance/alignment"),
    ],
    "leading": [
        ("N'est-il pas temps de changer de méthode ?", "polar", "Stance/alignment"),
        ("Ne faudrait-il pas écouter enfin les {group} ?", "polar", "Legitimation"),
    ],
    "framing-procedural": [
        ("Le {thing} sera-t-il prêt avant l'hiver ?", "polar", "Framing/agenda-setting"),
        ("La ville de {city} a-t-elle les moyens du {thing} ?", "polar", "Framing/agenda-setting"),
        ("Le projet passera-t-il le cap du vote en septembre ?", "polar", "Legitimation"),
        ("Le conseil d'État soutiendra-t-il le {thing} ?", "polar", "Authority positioning"),
        ("Le festival de {city} sera-t-il maintenu cette année ?", "polar",
         "Framing/agenda-setting"),
    ],
    "tag": [
        ("C'est une bonne nouvelle pour les {group}, n'est-ce pas ?", "tag", "Stance/alignment"),
        ("Le calendrier reste serré, non ?", "tag", "Discursive strategy"),
    ],
    "echo-clarification": [
        ("Trop tard ?", "elliptic", "Discursive strategy"),
        ("Vraiment ?", "elliptic", "Discursive strategy"),
        ("Et maintenant ?", "elliptic", "Framing/agenda-setting"),
    ],
}
STANCE_WEIGHTS = {"information-seeking": 5, "framing-procedural": 4, "rhetorical": 3,
                  "leading": 2, "tag": 1, "echo-clarification": 1}

# Answer sentences repeat the question's content words so the answer search
# can find them.
ANSWERS = [
    "Le {thing} de {city} coûtera environ {n} millions, a précisé la municipalité.",
    "Selon la direction du projet, le {thing} de {city} sera consulté et financé d'ici {n} mois.",
    "Les {group} de {city} seront associés au {thing} dès le mois prochain.",
    "Le retard du {thing} s'explique par {n} recours déposés contre le projet.",
]

FILLER = [
    "La séance s'est prolongée tard dans la soirée.",
    "Plusieurs élus ont pris la parole pour défendre leur position.",
    "Le dossier sera examiné une nouvelle fois la semaine prochaine.",
    "Les chiffres publiés mardi confirment la tendance observée depuis le printemps.",
    "Une réunion publique est prévue à la salle communale.",
    "La météo a compliqué l'organisation des travaux durant tout le mois.",
    "Le rapport final doit être rendu avant la fin de l'année.",
    "Les associations locales suivent le dossier avec attention.",
    "La presse régionale s'était déjà fait l'écho de ces inquiétudes.",
    "Aucune décision définitive n'a été prise à ce stade.",
    "Le calendrier initial prévoyait une inauguration au printemps.",
    "Les services techniques ont présenté trois variantes.",
    "Les opposants dénoncent un manque de transparence.",
    "Le maire a salué un compromis équilibré.",
    "La commission des finances rendra son avis lundi.",
    "Des panneaux d'information ont été installés près de la gare.",
]

OPENERS = [
    "Le {thing} de {city} fait à nouveau parler de lui.",
    "À {city}, le {thing} divise les {group}.",
    "Les {group} de {city} attendent des réponses sur le {thing}.",
    "Nouvelle étape pour le {thing} de {city} cette semaine.",
]

SPEAKERS = ["a lancé le maire", "s'interroge une habitante", "demande un conseiller",
            "ironise un opposant", "relève la présidente de l'association"]


def fill(template, ctx, rng):
    return template.format(thing=ctx["thing"], city=ctx["city"], group=ctx["group"],
                           n=rng.randint(2, 40))


def pick_stance(rng):
    labels = list(STANCE_WEIGHTS)
    return rng.choices(labels, weights=[STANCE_WEIGHTS[l] for l in labels])[0]


def build_article(index, rng):
    local = index % 2 == 0
    source = (LOCAL if local else NATIONAL)[(index // 2) % len(LOCAL if local else NATIONAL)]
    topic_id = index % len(TOPICS)
    ctx = {"thing": rng.choice(TOPICS[topic_id][1]), "city": rng.choice(CITIES),
           "group": rng.choice(GROUPS)}
    # Every fifth article is question-free.
    n_questions = 0 if index % 5 == 4 else rng.randint(1, 3)

    parts = []  # (text, question_info or None)
    parts.append((fill(rng.choice(OPENERS), ctx, rng), None))
    for _ in range(rng.randint(1, 3)):
        parts.append((rng.choice(FILLER), None))
    for _ in range(n_questions):
        stance = pick_stance(rng)
        template, form, axis = rng.choice(QUESTIONS[stance])
        question = fill(template, ctx, rng)
        quoted = stance not in ("echo-clarification",) and rng.random() < 0.3
        if quoted:
            text = "« " + question + " », " + rng.choice(SPEAKERS) + "."
        else:
            text = question
        answered = stance == "information-seeking" and rng.random() < 0.7
        parts.append((text, {"question": question, "stance": stance, "form": form, "axis": axis,
                             "quoted": quoted, "answered": answered}))
        if answered:
            parts.append((fill(rng.choice(ANSWERS), ctx, rng), None))
        for _ in range(rng.randint(1, 3)):
            parts.append((rng.choice(FILLER), None))
    parts.append((rng.choice(FILLER), None))

    text = ""
    questions = []
    for sentence, info in parts:
        if text:
            text += " "
        start = len(text)
        text += sentence
        if info is not None:
            q_start = start + sentence.index(info["question"])
            questions.append(dict(info, start=q_start, end=q_start + len(info["question"])))
    article = {"article_id": f"fx{index:03d}", "source": source, "topic_id": topic_id,
               "title": f"Article {index} : {ctx['thing']} à {ctx['city']}",
               "published_at": f"2024-{1 + index % 12:02d}-{1 + index % 28:02d}",
               "lang": "fr", "text": text}
    return article, questions


ADDRESSEE = {"rhetorical": "audience", "tag": "individual", "echo-clarification": "individual"}
# Annotator B's systematic confusions.
B_CONFUSION = {"rhetorical": "leading", "framing-procedural": "information-seeking",
               "tag": "leading", "leading": "rhetorical"}


def gold_units(article, questions, annotator, rng):
    units = []
    for q in questions:
        stance = q["stance"]
        if annotator == "B":
            r = rng.random()
            if r < 0.08:
                continue  # missed unit
            if r < 0.25 and stance in B_CONFUSION:
                stance = B_CONFUSION[stance]
        start, end = q["start"], q["end"]
        if annotator == "B" and rng.random() < 0.2 and end - start > 12:
            end -= 2  # slightly shorter span, dropping " ?"
        units.append({
            "article_id": article["article_id"],
            "unit_id": f"{article['article_id']}:{annotator}:{len(units) + 1}",
            "annotator_id": annotator,
            "span": {"start": start, "end": end},
            "text": article["text"][start:end],
            "interactional_context": "interview" if q["quoted"] else "non-interview",
            "addressee": ADDRESSEE.get(stance, "collective"),
            "form": q["form"],
            "function": stance,
            "macro_axes": [q["axis"]],
            "answer_realized": q["answered"],
        })
    return units


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    articles, units = [], []
    for i in range(50):
        article, questions = build_article(i, rng)
        articles.append(article)
        for annotator in ("A", "B"):
            units.extend(gold_units(article, questions, annotator, rng))
    with open(out / "articles.jsonl", "w", encoding="utf-8") as f:
        for a in articles:
            f.write(json.dumps(a, ensure_ascii=False) + "\n")
    with open(out / "gold_units.jsonl", "w", encoding="utf-8") as f:
        for u in units:
            f.write(json.dumps(u, ensure_ascii=False) + "\n")
    with open(out / "meta_topics.csv", "w", encoding="utf-8") as f:
        f.write("topic_id,meta_topic\n")
        for topic_id, (meta, _) in sorted(TOPICS.items()):
            f.write(f"{topic_id},{meta}\n")


if __name__ == "__main__":
    main()
