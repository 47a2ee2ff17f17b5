#!/usr/bin/env python3
"""Generates the bundled sample corpora under data/.

Outputs (deterministic for a fixed --seed):
  data/sample_corpus.txt   raw news-style sentences, one per line
  data/synthetic_news.csv  8-class labeled stand-in for a Potrika-shaped dataset

The text is assembled from hand-written Bengali lexicons with rule-based
inflection (genitive, locative, plural, classifier and objective suffixes), so
it carries realistic morphology. Some lines deliberately include digits,
Latin words, URLs and HTML tags to exercise the normalizer.
"""

import argparse
import csv
import json
import pathlib
import random

KARS = set("ািীুূৃেৈোৌ")
VIRAMA = "্"

SHARED_NOUNS = [
    "দেশ", "সরকার", "মানুষ", "বছর", "সময়", "কাজ", "বিষয়", "প্রতিষ্ঠান",
    "উদ্যোগ", "পরিকল্পনা", "সিদ্ধান্ত", "প্রতিবেদন", "সংবাদ", "তথ্য", "এলাকা",
    "শহর", "গ্রাম", "জেলা", "রাজধানী", "সমাজ", "জীবন", "ভবিষ্যৎ", "উন্নয়ন",
    "সমস্যা", "সম্ভাবনা", "অনুষ্ঠান", "আলোচনা", "প্রস্তাব", "নীতি", "ব্যবস্থা",
]
SHARED_PEOPLE = ["কর্মকর্তা", "নাগরিক", "প্রতিনিধি", "বিশেষজ্ঞ", "সদস্য", "নেতা", "কর্মী", "বাসিন্দা"]
SHARED_ADJ = [
    "নতুন", "বড়", "গুরুত্বপূর্ণ", "প্রথম", "সর্বোচ্চ", "জাতীয়", "আন্তর্জাতিক",
    "স্থানীয়", "বিশেষ", "সাম্প্রতিক", "দ্রুত", "বিভিন্ন", "প্রধান", "সফল", "কঠিন",
]
TIME_WORDS = [
    "আজ", "গতকাল", "সোমবার", "মঙ্গলবার", "বুধবার", "বৃহস্পতিবার", "শুক্রবার",
    "শনিবার", "রবিবার", "চলতি বছর", "গত মাসে", "আগামী সপ্তাহে", "সম্প্রতি",
]
CONNECTORS = ["এবং", "ও", "তবে", "এছাড়া", "অন্যদিকে", "ফলে", "এর মধ্যে", "একই সঙ্গে"]
POSTPOS = ["জন্য", "সঙ্গে", "থেকে", "পর্যন্ত", "মধ্যে", "নিয়ে", "বিষয়ে", "অনুযায়ী", "পরে", "আগে"]
SHARED_VERBS = [
    "করেছে", "করেছেন", "বলেছেন", "জানিয়েছেন", "হয়েছে", "অনুষ্ঠিত হয়েছে", "করবে",
    "দিয়েছেন", "পেয়েছে", "শুরু হয়েছে", "বেড়েছে", "কমেছে", "ঘোষণা করেছে",
    "উদ্বোধন করেন", "অংশ নেন", "আলোচনা করেন", "প্রকাশ করেছে", "নিশ্চিত করেছেন",
    "দাবি করেছেন", "আশা প্রকাশ করেন", "গ্রহণ করেছে", "চালু করেছে",
]

CATEGORIES = {
    "politics": {
        "nouns": ["নির্বাচন", "সংসদ", "দল", "মন্ত্রণালয়", "ভোট", "আসন", "জোট", "সমাবেশ",
                  "বিরোধী দল", "সংবিধান", "আইন", "প্রার্থী", "মনোনয়ন", "প্রচারণা", "ইশতেহার",
                  "রাজনীতি", "সংলাপ", "অধিবেশন", "বিল", "ক্ষমতা"],
        "people": ["মন্ত্রী", "সাংসদ", "নেতা", "ভোটার", "প্রধানমন্ত্রী", "রাষ্ট্রপতি", "সমর্থক", "কর্মী"],
        "verbs": ["পাস করেছে", "ভোট দিয়েছেন", "মনোনয়ন দিয়েছে", "শপথ নিয়েছেন", "পদত্যাগ করেছেন",
                  "বর্জন করেছে", "সমালোচনা করেন"],
        "adj": ["রাজনৈতিক", "সাংবিধানিক", "নিরপেক্ষ", "সংসদীয়"],
    },
    "sports": {
        "nouns": ["ম্যাচ", "দল", "ক্রিকেট", "ফুটবল", "গোল", "রান", "উইকেট", "টুর্নামেন্ট",
                  "বিশ্বকাপ", "সিরিজ", "মাঠ", "অনুশীলন", "শিরোপা", "ফাইনাল", "সেমিফাইনাল",
                  "স্কোর", "জয়", "পরাজয়", "লিগ", "স্টেডিয়াম"],
        "people": ["খেলোয়াড়", "অধিনায়ক", "কোচ", "ব্যাটসম্যান", "বোলার", "গোলরক্ষক", "দর্শক", "সমর্থক"],
        "verbs": ["জিতেছে", "হেরেছে", "গোল করেছেন", "সেঞ্চুরি করেছেন", "শিরোপা জিতেছে",
                  "ড্র করেছে", "উইকেট নিয়েছেন"],
        "adj": ["দুর্দান্ত", "রোমাঞ্চকর", "আক্রমণাত্মক", "শক্তিশালী"],
    },
    "economy": {
        "nouns": ["বাজার", "বাজেট", "রপ্তানি", "আমদানি", "মুদ্রাস্ফীতি", "ব্যাংক", "ঋণ", "বিনিয়োগ",
                  "শেয়ার", "দাম", "রাজস্ব", "কর", "প্রবৃদ্ধি", "রিজার্ভ", "টাকা", "ডলার",
                  "শিল্প", "কারখানা", "পণ্য", "মজুরি"],
        "people": ["ব্যবসায়ী", "বিনিয়োগকারী", "অর্থনীতিবিদ", "শ্রমিক", "উদ্যোক্তা", "ক্রেতা", "গ্রাহক", "রপ্তানিকারক"],
        "verbs": ["বিনিয়োগ করেছে", "লেনদেন হয়েছে", "দাম বেড়েছে", "দাম কমেছে", "ঋণ দিয়েছে",
                  "মুনাফা করেছে", "রপ্তানি করেছে"],
        "adj": ["আর্থিক", "অর্থনৈতিক", "বাণিজ্যিক", "মূল্যবান"],
    },
    "entertainment": {
        "nouns": ["চলচ্চিত্র", "সিনেমা", "গান", "নাটক", "অ্যালবাম", "কনসার্ট", "পুরস্কার", "মঞ্চ",
                  "ধারাবাহিক", "চরিত্র", "শুটিং", "উৎসব", "দর্শকপ্রিয়তা", "প্রেক্ষাগৃহ", "সংগীত",
                  "নৃত্য", "চিত্রনাট্য", "মুক্তি", "প্রিমিয়ার", "ভিডিও"],
        "people": ["অভিনেতা", "অভিনেত্রী", "পরিচালক", "শিল্পী", "গায়ক", "গায়িকা", "প্রযোজক", "ভক্ত"],
        "verbs": ["মুক্তি পেয়েছে", "অভিনয় করেছেন", "গান গেয়েছেন", "পুরস্কার পেয়েছেন",
                  "শুটিং শুরু করেছেন", "পরিচালনা করেছেন", "মঞ্চস্থ হয়েছে"],
        "adj": ["জনপ্রিয়", "ব্যবসাসফল", "সাংস্কৃতিক", "বিনোদনমূলক"],
    },
    "education": {
        "nouns": ["বিশ্ববিদ্যালয়", "বিদ্যালয়", "পরীক্ষা", "ফলাফল", "ভর্তি", "শিক্ষা", "পাঠ্যক্রম",
                  "বৃত্তি", "কলেজ", "ক্লাস", "পাঠ্যবই", "গবেষণা", "ডিগ্রি", "সনদ", "প্রশ্নপত্র",
                  "শ্রেণিকক্ষ", "গ্রন্থাগার", "সিলেবাস", "মূল্যায়ন", "পাঠদান"],
        "people": ["শিক্ষার্থী", "শিক্ষক", "ছাত্র", "ছাত্রী", "অভিভাবক", "উপাচার্য", "পরীক্ষার্থী", "গবেষক"],
        "verbs": ["পরীক্ষা দিয়েছে", "ভর্তি হয়েছে", "উত্তীর্ণ হয়েছে", "পাঠদান করেন",
                  "বৃত্তি পেয়েছে", "ফল প্রকাশ করেছে", "ক্লাস শুরু হয়েছে"],
        "adj": ["শিক্ষাগত", "একাডেমিক", "মেধাবী", "উচ্চতর"],
    },
    "national": {
        "nouns": ["পুলিশ", "সড়ক", "দুর্ঘটনা", "বন্যা", "আদালত", "মামলা", "হাসপাতাল", "চিকিৎসা",
                  "ঘূর্ণিঝড়", "নদী", "সেতু", "বিদ্যুৎ", "পানি", "যানজট", "অগ্নিকাণ্ড", "ত্রাণ",
                  "উপজেলা", "ইউনিয়ন", "থানা", "মহাসড়ক"],
        "people": ["পুলিশ সদস্য", "চিকিৎসক", "রোগী", "বিচারক", "আসামি", "কৃষক", "জেলে", "স্বেচ্ছাসেবক"],
        "verbs": ["গ্রেপ্তার করেছে", "মামলা করেছে", "নিহত হয়েছেন", "আহত হয়েছেন",
                  "উদ্ধার করেছে", "ত্রাণ বিতরণ করেছে", "রায় দিয়েছেন"],
        "adj": ["আঞ্চলিক", "উপকূলীয়", "জরুরি", "ক্ষতিগ্রস্ত"],
    },
    "international": {
        "nouns": ["যুক্তরাষ্ট্র", "চীন", "ভারত", "রাশিয়া", "জাতিসংঘ", "যুদ্ধ", "চুক্তি", "সীমান্ত",
                  "শরণার্থী", "নিষেধাজ্ঞা", "দূতাবাস", "সম্মেলন", "কূটনীতি", "ইউরোপ", "মধ্যপ্রাচ্য",
                  "আফ্রিকা", "জোট", "সংঘাত", "শান্তি", "বাণিজ্যচুক্তি"],
        "people": ["রাষ্ট্রদূত", "কূটনীতিক", "প্রেসিডেন্ট", "পররাষ্ট্রমন্ত্রী", "সেনা", "শরণার্থী", "বিদ্রোহী", "পর্যবেক্ষক"],
        "verbs": ["সফর করেছেন", "চুক্তি সই করেছে", "নিষেধাজ্ঞা দিয়েছে", "হামলা চালিয়েছে",
                  "বৈঠক করেছেন", "উদ্বেগ প্রকাশ করেছে", "যুদ্ধবিরতি ঘোষণা করেছে"],
        "adj": ["বৈশ্বিক", "দ্বিপক্ষীয়", "কূটনৈতিক", "সামরিক"],
    },
    "science_technology": {
        "nouns": ["প্রযুক্তি", "বিজ্ঞান", "মহাকাশ", "উপগ্রহ", "ইন্টারনেট", "স্মার্টফোন", "সফটওয়্যার",
                  "কৃত্রিম বুদ্ধিমত্তা", "রোবট", "গবেষণাগার", "আবিষ্কার", "টেলিস্কোপ", "ডেটা",
                  "নিরাপত্তা", "অ্যাপ", "কম্পিউটার", "নেটওয়ার্ক", "ব্যাটারি", "জিন", "টিকা"],
        "people": ["বিজ্ঞানী", "প্রকৌশলী", "প্রোগ্রামার", "গবেষক", "ব্যবহারকারী", "উদ্ভাবক", "নভোচারী", "প্রযুক্তিবিদ"],
        "verbs": ["উদ্ভাবন করেছেন", "আবিষ্কার করেছেন", "উৎক্ষেপণ করেছে", "হালনাগাদ করেছে",
                  "পরীক্ষা চালিয়েছেন", "উন্মোচন করেছে", "তৈরি করেছেন"],
        "adj": ["বৈজ্ঞানিক", "ডিজিটাল", "প্রযুক্তিগত", "উদ্ভাবনী"],
    },
}

LANGUAGES = ["বাংলা", "হিন্দি", "ইংরেজি", "আরবি", "উর্দু", "চীনা", "ফরাসি", "জাপানি"]
LANGUAGE_SENTENCES = [
    "{lang} ভাষাভাষীরা গর্বিত।",
    "বিশ্বজুড়ে {lang}ভাষাভাষীরা আজ মাতৃভাষা দিবস পালন করছেন।",
    "প্রবাসী {lang}ভাষাভাষীদের জন্য নতুন পাঠ্যক্রম চালু হয়েছে।",
    "{lang} ভাষাভাষীরা এই উৎসবে অংশ নেন।",
    "গবেষকরা বলেন {lang}ভাষাভাষীরা দ্রুত বাড়ছে।",
]

# Proper nouns give the text the long tail of rare word types that real news
# has; without them every word recurs often enough to become a single token.
GIVEN_NAMES = [
    "রহিম", "করিম", "সাকিব", "তামিম", "মাশরাফি", "নাসির", "আনিসুল", "মাহমুদ", "শফিক", "জাহিদ",
    "রফিক", "হাবিব", "কামরুল", "মিজানুর", "আরিফ", "সোহেল", "তানভীর", "ফারুক", "জসিম", "মনির",
    "সালমা", "নাসরিন", "ফাতেমা", "রুমানা", "শাহানা", "তাসলিমা", "নুসরাত", "সুমাইয়া", "মৌসুমী", "শর্মিলা",
    "অমিত", "সুব্রত", "দেবাশীষ", "প্রদীপ", "অনুপম", "সৌমিত্র", "বিপ্লব", "গৌতম", "সঞ্জয়", "পার্থ",
    "ইমরান", "জুবায়ের", "শাহরিয়ার", "মোস্তফা", "আশরাফুল", "নাজমুল", "রেজাউল", "খালেদ", "বদরুল", "আলমগীর",
]
SURNAMES = [
    "হোসেন", "রহমান", "আহমেদ", "চৌধুরী", "ইসলাম", "খান", "সরকার", "দাস", "বিশ্বাস", "মজুমদার",
    "তালুকদার", "ভট্টাচার্য", "চক্রবর্তী", "মুখার্জি", "সিদ্দিকী", "হক", "কবির", "আলম", "মিয়া", "শেখ",
    "পাটোয়ারী", "ভূঁইয়া", "বসু", "সেন", "গুহ", "দত্ত", "মল্লিক", "প্রামানিক", "হালদার", "জামান",
]
DISTRICTS = [
    "ঢাকা", "চট্টগ্রাম", "রাজশাহী", "খুলনা", "বরিশাল", "সিলেট", "রংপুর", "ময়মনসিংহ", "কুমিল্লা",
    "নোয়াখালী", "ফেনী", "লক্ষ্মীপুর", "চাঁদপুর", "ব্রাহ্মণবাড়িয়া", "কিশোরগঞ্জ", "নেত্রকোনা",
    "জামালপুর", "শেরপুর", "টাঙ্গাইল", "গাজীপুর", "নারায়ণগঞ্জ", "নরসিংদী", "মুন্সীগঞ্জ", "মানিকগঞ্জ",
    "ফরিদপুর", "গোপালগঞ্জ", "মাদারীপুর", "শরীয়তপুর", "রাজবাড়ী", "যশোর", "কুষ্টিয়া", "ঝিনাইদহ",
    "মাগুরা", "নড়াইল", "সাতক্ষীরা", "বাগেরহাট", "চুয়াডাঙ্গা", "মেহেরপুর", "পটুয়াখালী", "ভোলা",
    "পিরোজপুর", "ঝালকাঠি", "বরগুনা", "হবিগঞ্জ", "মৌলভীবাজার", "সুনামগঞ্জ", "দিনাজপুর", "ঠাকুরগাঁও",
    "পঞ্চগড়", "নীলফামারী", "লালমনিরহাট", "কুড়িগ্রাম", "গাইবান্ধা", "বগুড়া", "জয়পুরহাট", "নওগাঁ",
    "নাটোর", "পাবনা", "সিরাজগঞ্জ", "চাঁপাইনবাবগঞ্জ", "কক্সবাজার", "রাঙামাটি", "বান্দরবান", "খাগড়াছড়ি",
]

# Real Bengali spellings of places, languages and currencies from CLDR.
CLDR = json.loads((pathlib.Path(__file__).resolve().parent / "cldr_bn_names.json").read_text(encoding="utf-8"))

LATIN_NOISE = ["AI", "GDP", "IT", "BBC", "FIFA", "ICC", "Covid-19", "NASA", "online"]


def is_vowel_final(word: str) -> bool:
    last = word[-1]
    return last in KARS or "অ" <= last <= "ঔ"


def genitive(w):
    return w + ("র" if is_vowel_final(w) else "ের")


def locative(w):
    if is_vowel_final(w):
        return w + ("য়" if w[-1] == "া" else "তে")
    return w + "ে"


def plural_human(w):
    return w + "রা"


def plural_human_genitive(w):
    return w + "দের"


def objective(w):
    return w + "কে"


def classifier(w):
    return w + "টি"


def plural_thing(w):
    return w + "গুলো"


NOUN_FORMS = [
    (lambda w: w, 5),
    (genitive, 4),
    (locative, 3),
    (classifier, 1),
    (plural_thing, 1),
]
PEOPLE_FORMS = [
    (lambda w: w, 3),
    (plural_human, 4),
    (plural_human_genitive, 2),
    (genitive, 2),
    (objective, 1),
]


def pick_form(rng, forms, word):
    # Multi-word entries only inflect their last word.
    head, _, last = word.rpartition(" ")
    fns = [f for f, _ in forms]
    weights = [w for _, w in forms]
    inflected = rng.choices(fns, weights=weights)[0](last)
    return f"{head} {inflected}" if head else inflected


class SentenceMaker:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def noun(self, cat, leak):
        rng = self.rng
        if rng.random() < leak:
            cat = rng.choice(list(CATEGORIES))
        pool = CATEGORIES[cat]["nouns"] if rng.random() < 0.7 else SHARED_NOUNS
        return pick_form(rng, NOUN_FORMS, rng.choice(pool))

    def person(self, cat, leak):
        rng = self.rng
        if rng.random() < leak:
            cat = rng.choice(list(CATEGORIES))
        pool = CATEGORIES[cat]["people"] if rng.random() < 0.75 else SHARED_PEOPLE
        return pick_form(rng, PEOPLE_FORMS, rng.choice(pool))

    def adj(self, cat):
        rng = self.rng
        pool = CATEGORIES[cat]["adj"] if rng.random() < 0.5 else SHARED_ADJ
        return rng.choice(pool)

    def verb(self, cat, leak):
        rng = self.rng
        if rng.random() < leak:
            cat = rng.choice(list(CATEGORIES))
        pool = CATEGORIES[cat]["verbs"] if rng.random() < 0.6 else SHARED_VERBS
        return rng.choice(pool)

    def name(self):
        rng = self.rng
        given, surname = rng.choice(GIVEN_NAMES), rng.choice(SURNAMES)
        return f"{given} {pick_form(rng, PEOPLE_FORMS[:1] + PEOPLE_FORMS[3:], surname)}"

    def place(self, cat=None):
        rng = self.rng
        r = rng.random()
        if cat == "international" or r < 0.25:
            pool = CLDR["territories"] if rng.random() < 0.5 else CLDR["cities"]
        else:
            pool = DISTRICTS
        return pick_form(rng, NOUN_FORMS[:3], rng.choice(pool))

    def sentence(self, cat, leak=0.15):
        rng = self.rng
        parts = []
        if rng.random() < 0.5:
            parts.append(rng.choice(TIME_WORDS))
        if rng.random() < 0.35:
            parts.append(self.place(cat))
        if rng.random() < 0.3:
            parts.append(self.name())
        if rng.random() < 0.12:
            parts.append(f"{rng.randint(1990, 2025)} সালে".translate(BN_DIGITS))
        parts.append(self.person(cat, leak))
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.4:
                parts.append(self.adj(cat))
            parts.append(self.noun(cat, leak))
            if rng.random() < 0.35:
                parts.append(rng.choice(POSTPOS))
        if cat == "economy" and rng.random() < 0.3:
            parts.append(pick_form(rng, NOUN_FORMS[:2], rng.choice(CLDR["currencies"])))
        if rng.random() < 0.25:
            parts.append(rng.choice(CONNECTORS))
            parts.append(self.noun(cat, leak))
        if rng.random() < 0.06:
            parts.insert(rng.randrange(len(parts) + 1), rng.choice(LATIN_NOISE))
        parts.append(self.verb(cat, leak))
        end = rng.choices(["।", "।", "।", "?", "!"], weights=[6, 1, 1, 1, 1])[0]
        line = " ".join(parts) + end
        noise = rng.random()
        if noise < 0.02:
            line += " https://example.com/news/" + str(rng.randint(100, 999))
        elif noise < 0.04:
            line = "<p>" + line + "</p>"
        elif noise < 0.06:
            line = line.replace(" ", "  ", 1)
        return line


BN_DIGITS = str.maketrans("0123456789", "০১২৩৪৫৬৭৮৯")


def make_sample_corpus(rng, n_lines):
    maker = SentenceMaker(rng)
    cats = list(CATEGORIES)
    lines = []
    for i in range(n_lines):
        if i % 20 == 0:
            tmpl = rng.choice(LANGUAGE_SENTENCES)
            pool = LANGUAGES if rng.random() < 0.5 else CLDR["languages"]
            lines.append(tmpl.format(lang=rng.choice(pool)))
        else:
            lines.append(maker.sentence(rng.choice(cats)))
    return lines


def make_labeled(rng, per_class):
    maker = SentenceMaker(rng)
    rows = []
    for cat in CATEGORIES:
        for _ in range(per_class):
            n = rng.randint(3, 7)
            doc = []
            for _ in range(n):
                # A third of the sentences come from a random other topic.
                src = cat if rng.random() < 0.67 else rng.choice(list(CATEGORIES))
                doc.append(maker.sentence(src, leak=0.2))
            rows.append((" ".join(doc), cat))
    rng.shuffle(rows)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--lines", type=int, default=2400)
    ap.add_argument("--per-class", type=int, default=250)
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(args.seed)
    lines = make_sample_corpus(rng, args.lines)
    (out / "sample_corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    rng = random.Random(args.seed + 1)
    rows = make_labeled(rng, args.per_class)
    with open(out / "synthetic_news.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(["text", "label"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
