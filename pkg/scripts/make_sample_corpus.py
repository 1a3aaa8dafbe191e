#!/usr/bin/env python3
"""Generate the bundled sample corpus (src/tntagger/data/sample.tt).

The corpus is synthetic English-like text with Penn-style tags, drawn from
a small stochastic grammar over Zipf-distributed open-class vocabularies,
with a few percent of tokens relabelled to mimic annotation inconsistency.
It exists so the tagger can be trained and evaluated without licensed
treebanks; output is fully determined by the seed.

    python scripts/make_sample_corpus.py --sentences 2500 --seed 7 -o src/tntagger/data/sample.tt
"""
import argparse
import random

ONSETS = ["b", "br", "c", "cl", "d", "dr", "f", "fl", "g", "gr", "h", "j", "k", "l", "m", "n",
          "p", "pl", "pr", "r", "s", "sl", "st", "t", "tr", "v", "w", "z", "sh", "ch", "th"]
VOWELS = ["a", "e", "i", "o", "u", "ai", "ea", "oo", "ou"]
CODAS = ["", "", "n", "r", "l", "m", "nd", "st", "rk", "nt", "ll", "ck", "sh", "p", "t"]

VERBS = """walk talk play work call ask need help start look open turn show move listen
answer want follow climb visit pull push watch finish wash kick jump laugh learn
cook clean paint fill mark check count crash dream enjoy expect explain fix greet
guard hunt join kill lift list miss order pack plant pray print reach rain remain
rest return sail search shout sign smell spell test thank train travel trust visit
wait warn wish yell borrow collect connect consider contain deliver depend like""".split()
NOUNS = """time year people way day man thing woman life child world school state family
student group country problem hand part place case week company system program
question government number night point home water room mother area money story fact
month lot right study book eye job word business issue side kind head house service
friend father power hour game line end member law car city community name president
team minute idea kid body information back parent face others level office door health
person art war history party result change morning reason research girl guy moment air
teacher force education foot boy age policy process music market sense nation plan""".split()
ADJS = """other new good high old great big small large national young different black
long little important political bad white real best right social only public sure low
early able human local late hard major better economic strong possible whole free
military true federal international full special easy clear recent certain personal
open red difficult available likely short single medical current wrong private past
foreign fine common poor natural significant similar hot dead central happy serious""".split()
ADJ_SUFFIXES = ["ous", "ful", "ive", "al", "able", "ic", "less", "ish"]
NOUN_SUFFIXES = ["tion", "ment", "ness", "ity", "er", "ism", "ance", ""]

DT_SING = ["the", "a", "this", "that", "every", "no", "each", "the", "the", "a"]
DT_PLUR = ["the", "these", "those", "some", "many", "the", "no", "all"]
PRP_SUBJ = ["he", "she", "it", "they", "we", "I", "you"]
PRP_OBJ = ["him", "her", "it", "them", "us", "me", "you"]
PRPS = ["his", "her", "its", "their", "our", "my", "your"]
PREPS = ["in", "on", "at", "with", "from", "of", "for", "by", "about", "after", "before",
         "over", "under", "like", "into", "during", "without", "against", "to", "up", "down", "off"]
PARTICLES = ["up", "out", "down", "off", "over", "back"]
MODALS = ["will", "can", "would", "could", "should", "may", "might", "must"]
ADVS = ["not", "also", "very", "often", "never", "still", "already", "always", "just", "soon",
        "here", "there", "now", "then"]
NUMS = ["one", "two", "three", "four", "five", "ten", "twelve", "twenty", "100", "1998", "42",
        "3.5", "17", "250", "1,000", "60"]


def pseudo(rng, syllables):
    return "".join(rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS) for _ in range(syllables))


def verb_forms(stem):
    if stem.endswith("e"):
        return {"VB": stem, "VBP": stem, "VBZ": stem + "s", "VBD": stem + "d", "VBG": stem[:-1] + "ing"}
    if stem.endswith(("sh", "ch", "s", "x", "z")):
        vbz = stem + "es"
    elif stem.endswith("y") and stem[-2:-1] not in "aeiou":
        vbz = stem[:-1] + "ies"
    else:
        vbz = stem + "s"
    vbd = stem[:-1] + "ied" if stem.endswith("y") and stem[-2:-1] not in "aeiou" else stem + "ed"
    return {"VB": stem, "VBP": stem, "VBZ": vbz, "VBD": vbd, "VBG": stem + "ing"}


def plural(noun):
    if noun.endswith(("sh", "ch", "s", "x", "z")):
        return noun + "es"
    if noun.endswith("y") and noun[-2:-1] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


class Zipf:
    def __init__(self, rng, items, s=1.05, shuffle=True):
        self.rng = rng
        self.items = list(items)
        if shuffle:
            rng.shuffle(self.items)
        self.weights = [1.0 / (r + 1) ** s for r in range(len(self.items))]
        self.cum = []
        acc = 0.0
        for w in self.weights:
            acc += w
            self.cum.append(acc)

    def __call__(self):
        import bisect
        x = self.rng.random() * self.cum[-1]
        return self.items[bisect.bisect_left(self.cum, x)]


class Grammar:
    def __init__(self, rng):
        self.rng = rng
        stems = set(VERBS)
        while len(stems) < 700:
            stems.add(pseudo(rng, rng.choice([1, 1, 2])))
        nouns = set(NOUNS)
        while len(nouns) < 1800:
            nouns.add(pseudo(rng, rng.choice([1, 2, 2])) + rng.choice(NOUN_SUFFIXES))
        adjs = set(ADJS)
        while len(adjs) < 600:
            adjs.add(pseudo(rng, rng.choice([1, 2])) + rng.choice(ADJ_SUFFIXES))
        names = set()
        while len(names) < 500:
            names.add(pseudo(rng, rng.choice([1, 2, 2, 3])).capitalize())
        self.verb = Zipf(rng, sorted(stems))
        self.adj = Zipf(rng, sorted(adjs))
        # frequent verb stems and some adjectives double as frequent nouns
        # (walk/NN vs VB, walks/NNS vs VBZ, past/JJ vs NN)
        order = sorted(nouns - stems - adjs)
        rng.shuffle(order)
        shared = [v for v in self.verb.items[:250] if rng.random() < 0.6]
        shared += [a for a in self.adj.items[:200] if rng.random() < 0.25]
        for w in shared:
            if w not in order:
                order.insert(rng.randrange(0, 400), w)
        self.noun = Zipf(rng, order, shuffle=False)
        self.name = Zipf(rng, sorted(names), 0.9)
        self.adv_adj = Zipf(rng, sorted(a for a in adjs if not a.endswith(("ic", "ly"))))

    def p(self, prob):
        return self.rng.random() < prob

    def choice(self, xs):
        return self.rng.choice(xs)

    def np(self, subject=False, depth=0):
        r = self.rng.random()
        if r < 0.18:
            return [(self.choice(PRP_SUBJ), "PRP")] if subject else [(self.choice(PRP_OBJ), "PRP")]
        if r < 0.30:
            out = [(self.name(), "NNP")]
            if self.p(0.35):
                out.append((self.name(), "NNP"))
            if self.p(0.1):
                out += [("'s", "POS"), (self.noun(), "NN")]
            return out
        plural_np = self.p(0.35)
        out = []
        if plural_np:
            if self.p(0.25):
                out.append((self.choice(NUMS), "CD"))
            elif self.p(0.75):
                d = self.choice(DT_PLUR)
                out.append((d, "DT"))
        else:
            if self.p(0.15):
                out.append((self.choice(PRPS), "PRP$"))
            else:
                out.append((self.choice(DT_SING), "DT"))
        while self.p(0.3 if len(out) < 3 else 0.1):
            if self.p(0.15):
                out.append(("very", "RB"))
            r = self.rng.random()
            if r < 0.15:  # participles used attributively: "the painted door"
                out.append((verb_forms(self.verb())["VBD"], "JJ"))
            elif r < 0.22:
                out.append((verb_forms(self.verb())["VBG"], "JJ"))
            else:
                out.append((self.adj(), "JJ"))
        if not plural_np and len(out) == 1 and out[0][1] == "DT" and self.p(0.04):
            return [(verb_forms(self.verb())["VBG"], "NN")]  # gerund: "walking helps"
        noun = self.noun()
        if self.p(0.12):
            out.append((self.noun(), "NN"))
        out.append((plural(noun), "NNS") if plural_np else (noun, "NN"))
        if depth == 0 and self.p(0.2):
            out += self.pp(depth + 1)
        if depth == 0 and self.p(0.07):
            out += [("that", "WDT")] + self.vp(depth + 1)
        return out

    def pp(self, depth=0):
        return [(self.choice(PREPS), "IN")] + self.np(depth=depth)

    def verb_token(self, tag):
        return (verb_forms(self.verb())[tag], tag)

    def vp(self, depth=0, plural_subj=False):
        r = self.rng.random()
        present = "VBP" if plural_subj else "VBZ"
        if r < 0.30:
            out = [self.verb_token(self.choice(["VBD", "VBD", present]))]
            if self.p(0.15):  # phrasal verb: "picked up the box"
                out.append((self.choice(PARTICLES), "RP"))
            out += self.np(depth=depth)
        elif r < 0.42:
            out = [(self.choice(MODALS), "MD")]
            if self.p(0.2):
                out.append(("not", "RB"))
            out += [self.verb_token("VB")] + self.np(depth=depth)
        elif r < 0.52:
            aux = self.choice([("has", "VBZ"), ("had", "VBD"), ("have", "VBP")])
            v = verb_forms(self.verb())["VBD"]
            out = [aux, (v, "VBN")] + (self.np(depth=depth) if self.p(0.6) else [])
        elif r < 0.62:
            cop = self.choice([("is", "VBZ"), ("was", "VBD"), ("are", "VBP"), ("were", "VBD")])
            out = [cop] + ([("very", "RB")] if self.p(0.2) else []) + [(self.adj(), "JJ")]
        elif r < 0.70:
            cop = self.choice([("is", "VBZ"), ("was", "VBD"), ("are", "VBP")])
            out = [cop, self.verb_token("VBG")] + self.np(depth=depth)
        elif r < 0.78:
            out = [self.verb_token(self.choice(["VBD", present])), ("to", "TO"), self.verb_token("VB")]
            out += self.np(depth=depth)
        elif r < 0.86:
            out = [self.verb_token("VBD"), (self.adv_adj() + "ly", "RB")]
        elif r < 0.92:
            out = [self.verb_token(self.choice(["VBD", present])), ("that", "IN")] + self.clause(depth + 1)
        else:
            out = [self.verb_token("VBD")] + self.np(depth=depth) + self.pp(depth + 1)
        if self.p(0.15):
            out += self.pp(depth + 1)
        return out

    def clause(self, depth=0):
        if self.p(0.05):
            return [("there", "EX"), self.choice([("is", "VBZ"), ("was", "VBD")])] + self.np()
        subj = self.np(subject=True)
        plural_subj = subj[-1][1] == "NNS" or subj[-1][0] in ("they", "we", "I", "you")
        return subj + (self.vp(depth, plural_subj) if depth < 2 else [self.verb_token("VBD")])

    def sentence(self):
        out = []
        if self.p(0.12):
            out += [(self.choice(["however", "then", "now", "still", "soon"]), "RB"), (",", ",")]
        elif self.p(0.08):
            out += self.pp() + [(",", ",")]
        out += self.clause()
        if self.p(0.18):
            out += [(",", ",") if self.p(0.5) else ("and", "CC")]
            if out[-1][0] == ",":
                out.append((self.choice(["and", "but", "or"]), "CC"))
            out += self.clause()
        end = self.rng.random()
        out.append(("." if end < 0.9 else "!" if end < 0.95 else "?", "."))
        w, t = out[0]
        if t not in ("NNP",) and w != "I":
            out[0] = (w[0].upper() + w[1:], t)
        return out


# tags annotators tend to mix up; anything else drifts to a random tag
CONFUSIONS = {"NN": ["JJ", "NNP", "VB"], "JJ": ["NN", "VBN", "RB"], "VBD": ["VBN", "JJ"],
              "VBN": ["VBD", "JJ"], "VBG": ["NN", "JJ"], "IN": ["RB", "RP"], "RP": ["IN", "RB"],
              "RB": ["IN", "JJ"], "NNS": ["VBZ"], "VBZ": ["NNS"], "VB": ["VBP", "NN"],
              "VBP": ["VB"], "NNP": ["NN", "JJ"], "DT": ["IN", "PRP", "RB"]}


def add_noise(rng, sent, rate, tags):
    """Relabel a few tokens, the way a real annotation effort does."""
    out = []
    for w, t in sent:
        if t != "." and rng.random() < rate:
            alts = CONFUSIONS.get(t)
            t = rng.choice(alts) if alts and rng.random() < 0.7 else rng.choice(tags)
        out.append((w, t))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sentences", type=int, default=2500)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--noise", type=float, default=0.03, help="share of relabelled tokens")
    ap.add_argument("-o", "--output", required=True)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    g = Grammar(rng)
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        sents = [g.sentence() for _ in range(args.sentences)]
        tags = sorted({t for s in sents for _, t in s} - {"."})
        blocks = ["".join(f"{w}\t{t}\n" for w, t in add_noise(rng, s, args.noise, tags)) for s in sents]
        f.write("\n".join(blocks))


if __name__ == "__main__":
    main()
