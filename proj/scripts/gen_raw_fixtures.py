#!/usr/bin/env python3
"""Writes the synthetic raw corpora under data/fixtures/raw.

The corpora mimic the shape of the public datasets listed in data/catalog.json
(same source formats, label inventories and a few verbatim sentences) so the
pipeline can be exercised end to end without the original downloads.
Output is deterministic.
"""

import csv
import io
import json
import random
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data/fixtures/raw"
rng = random.Random(20221015)


def write(name, text):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(text, encoding="utf-8", newline="\n")


# ---------------------------------------------------------------- SMS-SPAM
SPAM = [
    "WINNER!! You have been selected to receive a {amt} prize reward. Call {num} to claim",
    "Free entry in a weekly competition to win {item}. Text WIN to {num}",
    "URGENT! Your mobile number has won {amt} cash. Reply CLAIM now",
    "Congratulations you have won a {item}! Visit {site} to collect before midnight",
    "Your account has been suspended. Verify your details at {site} immediately",
]
HAM = [
    "see you at {hour}",
    "Ok lar... I'll call you when I reach {place}",
    "Are we still meeting at the {place} tomorrow?",
    "Can you pick up {item} on the way home",
    "I'm running late, be there by {hour}",
    "Thanks for yesterday, the {item} was great",
]


def fill(t):
    return t.format(
        amt=rng.choice(["£1000", "£2000", "$500", "£150"]),
        num=rng.choice(["08712300220", "87121", "09061701461", "81010"]),
        item=rng.choice(["an iPod", "a holiday", "milk", "the tickets", "a Nokia phone", "dinner"]),
        site=rng.choice(["http://win-now.biz", "www.claim-prize.co", "secure-verify.net"]),
        hour=rng.choice(["5", "7pm", "half six", "noon"]),
        place=rng.choice(["the station", "office", "library", "cafe"]),
    )


rows = [("win a prize now", "spam"), ("see you at 5", "ham")]
for i in range(198):
    spam = rng.random() < 0.4
    rows.append((fill(rng.choice(SPAM if spam else HAM)) + ("" if rng.random() < 0.7 else f" ({i})"),
                 "spam" if spam else "ham"))
buf = io.StringIO()
buf.write("label\ttext\n")
for text, label in rows:
    buf.write(f"{label}\t{text}\n")
write("sms_spam.tsv", buf.getvalue())

# ---------------------------------------------------------------- CTD
POSTS_YES = ["selling fresh {x} dumps, escrow accepted", "new {x} exploit kit for sale, PM me",
             "looking for a crypter to bypass {x}", "dumped {x} database, 40k accounts inside"]
POSTS_NO = ["how do I update {x} on my laptop", "best headphones under $50?",
            "anyone watching the game tonight", "my {x} keeps crashing after the update"]
POSTS_UNDECIDED = ["anyone know a way into {x} accounts", "interesting thread about {x} security"]
rows = []
for _ in range(120):
    r = rng.random()
    x = rng.choice(["paypal", "netflix", "windows", "wordpress", "android"])
    if r < 0.35:
        rows.append((rng.choice(POSTS_YES).format(x=x), "Yes"))
    elif r < 0.5:
        rows.append((rng.choice(POSTS_UNDECIDED).format(x=x), "Undecided"))
    else:
        rows.append((rng.choice(POSTS_NO).format(x=x), "No"))
write("ctd.tsv", "post\tlabel\n" + "".join(f"{t}\t{l}\n" for t, l in rows))

# ---------------------------------------------------------------- URL (comma separated, quoted)
buf = io.StringIO()
w = csv.writer(buf, lineterminator="\n")
w.writerow(["domain", "label"])
for _ in range(100):
    if rng.random() < 0.5:
        w.writerow([rng.choice(["paypal-login.", "secure-update.", "appleid-verify."]) +
                    rng.choice(["com.ru", "info", "xyz"]) + "/" + rng.choice(["signin", "acc,ount", "verify?id=1"]),
                    "phishing"])
    else:
        w.writerow([rng.choice(["github.com", "en.wikipedia.org", "nvd.nist.gov", "www.bbc.co.uk"]) + "/" +
                    rng.choice(["", "wiki/Main_Page", "vuln/search", "news"]), "legitimate"])
write("url.csv", buf.getvalue())

# ---------------------------------------------------------------- Soft-Flaw CLS
rows = []
for _ in range(80):
    if rng.random() < 0.5:
        rows.append((rng.choice(["New #ransomware strain {m} spreading via phishing emails",
                                 "{m} botnet now targets unpatched routers #infosec"]).format(
            m=rng.choice(["Ryuk", "Emotet", "Mirai", "WannaCry"])), "malicious"))
    else:
        rows.append((rng.choice(["Great talk on secure coding at the meetup today",
                                 "Remember to update your phone this weekend"]), "benign"))
write("soft_flaw_cls.tsv", "tweet\tlabel\n" + "".join(f"{t}\t{l}\n" for t, l in rows))

# ---------------------------------------------------------------- MDB sentences and relations
ACTORS = ["The attackers", "The malware", "The backdoor", "Trojan.Skelky", "The dropper", "Moose"]
ACTIONS = ["uses", "deploys", "downloads", "executes", "allows", "contacts"]
OBJECTS = ["the ShellExecute() API", "a second-stage payload", "the C&C server", "stolen credentials",
           "a remote shell", "commands on the victim device"]
FILLER = ["The report was published in {y}.", "Figure {n} shows the timeline of the campaign.",
          "More details are given in the full report.", "We thank our colleagues for their help."]
sent_rows, rel_rows = [], []
for d in range(83):
    doc = f"APT{d + 1:03d}"
    for _ in range(3):
        if rng.random() < 0.55:
            a, v, o = rng.choice(ACTORS), rng.choice(ACTIONS), rng.choice(OBJECTS)
            sent_rows.append((doc, f"{a} {v} {o}.", "True"))
        else:
            sent_rows.append((doc, rng.choice(FILLER).format(y=rng.choice([2013, 2014, 2015]), n=rng.randint(1, 9)),
                              "False"))
    a, v, o = rng.choice(ACTORS), rng.choice(ACTIONS), rng.choice(OBJECTS)
    sentence = f"{a} {v} {o}."
    rel_rows.append((doc, a.lower(), v, sentence, "SubjAction"))
    rel_rows.append((doc, v, o, sentence, rng.choice(["ActionObj", "ModObj"])))
    if rng.random() < 0.4:
        rel_rows.append((doc, a.lower(), "it", sentence + " It then exits.", "CoRefer"))
sent_rows[0] = ("APT001", "The attackers focused on obtaining access to specific systems of interest in all of "
                "the compromised organizations.", "True")
sent_rows[1] = ("APT001", "The Skelky ( from skeleton key ) tool is deployed when an attacker gains access to a "
                "victims network ; the attackers may also utilize other tools and elements in their attack.",
                "False")
rel_rows[0] = ("APT001", "a tool", "allows", "<doc>", "SubjAction")
write("mdb_sentences.tsv", "doc\tsentence\trelevant\n" + "".join(f"{d}\t{s}\t{l}\n" for d, s, l in sent_rows))
write("mdb_relations.tsv", "doc\te1\te2\ttext\trelation\n" +
      "".join(f"{d}\t{a}\t{b}\t{t}\t{l}\n" for d, a, b, t, l in rel_rows))

# ---------------------------------------------------------------- SAL (BIO token-tagged)
VENDORS = ["Lexmark", "Oracle", "Cisco", "Microsoft", "Adobe", "Apple", "IBM", "Mozilla"]
PRODUCTS = ["Solaris", "Firefox", "Acrobat Reader", "Internet Explorer", "WebSphere", "iOS", "IOS XE", "SQL server"]
VERSIONS = ["1.2.3", "2.0", "10.1.4", "before 7.08", "through 20190731", "5.x"]
TERMS = ["remote attackers", "denial of service", "execute arbitrary code", "cross-site scripting",
         "SQL injection", "local users", "arbitrary files", "symlink attack", "buffer overflow"]
FILES = ["/tmp/CLEANUP", "spiro.c", "index.php", "admin/login.asp"]
FUNCS = ["spiro_to_bpath0()", "strcpy()", "parse_header()"]


def tagged(words, tag):
    toks = words.split(" ")
    return [(t, ("B-" if i == 0 else "I-") + tag) for i, t in enumerate(toks)]


def plain(words):
    return [(t, "O") for t in words.split(" ")]


def sal_sentence():
    kind = rng.random()
    if kind < 0.12:
        return plain(rng.choice(["The vendor has not released a statement .",
                                 "No further details are available at this time ."]))
    s = []
    s += plain("The") if rng.random() < 0.5 else plain("A flaw in")
    s += tagged(rng.choice(VENDORS), "N")
    s += tagged(rng.choice(PRODUCTS), "F")
    if rng.random() < 0.6:
        s += tagged(rng.choice(VERSIONS), "V")
    s += tagged("allows", "L")
    s += tagged(rng.choice(TERMS), "L")
    s += plain("to cause")
    s += tagged(rng.choice(TERMS), "L")
    if rng.random() < 0.5:
        s += plain("via")
        s += tagged(rng.choice(FILES), "S")
    if rng.random() < 0.3:
        s += plain("in the")
        s += tagged(rng.choice(FUNCS), "M")
        s += plain("function")
    s += plain(".")
    return s


lexmark_sentence = []
lexmark_sentence += plain("The embedded HTTP server in multiple")
lexmark_sentence += tagged("Lexmark", "N")
lexmark_sentence += plain("laser and inkjet printers and MarkNet devices , including")
for i, model in enumerate(["X94x", "W840", "T656", "N4000", "E462", "C935dn", "25xxN"]):
    lexmark_sentence += tagged(model, "F")
    lexmark_sentence += plain(",")
lexmark_sentence += plain("and other models ,")
lexmark_sentence += tagged("allows", "L")
lexmark_sentence += tagged("remote attackers", "L")
lexmark_sentence += plain("to cause a")
lexmark_sentence += tagged("denial of service", "L")
lexmark_sentence += plain("( operating system halt ) via a malformed HTTP")
lexmark_sentence += tagged("Authorization", "L")
lexmark_sentence += plain("header .")
solaris_sentence = (plain("Certain patch-installation scripts in Oracle") + tagged("Solaris", "I") + plain("allow") +
                    tagged("local users", "L") + plain("to append data to") + tagged("arbitrary files", "L") +
                    plain("via a") + tagged("symlink attack", "L") +
                    plain("on the /tmp/CLEANUP temporary file , related to use of Update Manager ."))
sentences = [lexmark_sentence, solaris_sentence] + [sal_sentence() for _ in range(148)]
# one orphan I- tag, repaired at load time
sentences[5] = [("Cisco", "I-N")] + sentences[5][1:]
write("sal.conll", "\n".join("\n".join(f"{t} {g}" for t, g in s) + "\n" for s in sentences))

# ---------------------------------------------------------------- Soft-Flaw NER (bare tags)
lines = []
for _ in range(80):
    if rng.random() < 0.3:
        toks = [(w, "O") for w in "patched all my machines this morning".split()]
    else:
        m = rng.choice(["WannaCry", "Mirai botnet", "Emotet", "Log4Shell"]).split()
        toks = [(w, "O") for w in "watch out for".split()] + [(w, "Malicious") for w in m] + \
               [(w, "O") for w in "spreading fast #infosec".split()]
    lines.append("\n".join(f"{t}\t{g}" for t, g in toks) + "\n")
write("soft_flaw_ner.conll", "\n".join(lines))

# ---------------------------------------------------------------- SOFTNER (BIO, code-heavy)
lines = []
for _ in range(100):
    toks = plain("I get")
    toks += tagged(rng.choice(["NullPointerException", "TypeError", "segfault"]), "Error_Name")
    toks += plain("when calling")
    toks += tagged(rng.choice(["getView()", "json.loads", "std::sort"]), "Function")
    toks += plain("from")
    toks += tagged(rng.choice(["C:\\Users\\me\\app.py", "MainActivity.java", "{config}.json"]), "File_Name")
    toks += plain("on")
    toks += tagged(rng.choice(["Windows 10", "Ubuntu", "macOS"]), "Operating_System")
    toks += plain("?")
    lines.append("\n".join(f"{t} {g}" for t, g in toks) + "\n")
write("softner.conll", "\n".join(lines))

# ---------------------------------------------------------------- CASIE (event-annotated JSONL)
EVENTS = {
    "Databreach": (["was hacked", "breached", "stole", "leaked"], ["Data", "Organization", "Number", "Time"]),
    "Phishing": (["phishing campaign", "spoofed emails", "lured"], ["Person", "Website", "Organization", "Time"]),
    "Ransom": (["a demand was made", "encrypted", "ransomware attack"], ["Money", "System", "Time", "Organization"]),
    "Vulnerability-Discover": (["discovered", "found a flaw", "disclosed"], ["Software", "CVE", "Person", "Version"]),
    "Vulnerability-Patch": (["patched", "released a fix", "updated"], ["Software", "Patch", "Version", "Time"]),
}
SURFACES = {
    "Data": ["customer records", "credit card numbers", "email addresses"],
    "Organization": ["Dorset Police", "Equifax", "the city council", "Microsoft"],
    "Number": ["40,000", "3 million", "two hundred"],
    "Time": ["early Tuesday morning", "5:30 PM Wednesday", "last week", "in 2016"],
    "Person": ["security researchers", "a spokeswoman", "employees"],
    "Website": ["paypal-login.com", "a fake portal"],
    "Money": ["£120,000", "$50,000 in Bitcoin"],
    "System": ["servers", "their computer", "FTP servers"],
    "Software": ["Apache Struts", "WordPress", "OpenSSL"],
    "CVE": ["CVE-2017-5638", "CVE-2019-16364"],
    "Version": ["version 2.3", "4.9.1"],
    "Patch": ["a security update", "patch 1.0.2"],
}
ROLE_OF = {"Data": "Compromised-Data", "Organization": "Victim", "Number": "Number-of-Victim", "Time": "Time",
           "Person": "Attacker", "Website": "Tool", "Money": "Payment-Method", "System": "Victim",
           "Software": "Vulnerability", "CVE": "Vulnerability", "Version": "Vulnerability", "Patch": "Patch"}

records = [
    {"text": "It was reported that their computer was hacked and a demand was made for £120,000 a Dorset Police "
             "spokeswoman said",
     "nuggets": [{"surface": "a demand was made", "type": "Ransom"}],
     "arguments": [{"surface": "their computer", "type": "System"}, {"surface": "£120,000", "type": "Money"},
                   {"surface": "Dorset Police", "type": "Organization"}],
     "roles": [{"nugget": "a demand was made", "argument": "their computer", "role": "Victim"},
               {"nugget": "a demand was made", "argument": "£120,000", "role": "Payment-Method"}]},
    {"text": "The group never stated where their cache of data came from until today when they contacted TNW in "
             "response to Apple", "nuggets": [], "arguments": [], "roles": []},
    {"text": "The attack disabled servers early Tuesday morning, and city officials say it was contained by "
             "5:30 PM Wednesday.",
     "nuggets": [{"surface": "The attack", "type": "Databreach"}],
     "arguments": [{"surface": "servers", "type": "System"}, {"surface": "early Tuesday morning", "type": "Time"},
                   {"surface": "5:30 PM Wednesday", "type": "Time"}],
     "roles": [{"nugget": "The attack", "argument": "servers", "role": "Victim"},
               {"nugget": "The attack", "argument": "early Tuesday morning", "role": "Time"}]},
    {"text": "In some cases, a generic password is required, although security researchers have discovered that in "
             "many cases, FTP servers can be accessed without a password.",
     "nuggets": [{"surface": "discovered", "type": "Vulnerability-Discover"}],
     "arguments": [{"surface": "FTP servers", "type": "System"},
                   {"surface": "can be accessed without a password", "type": "Capabilities"},
                   {"surface": "security researchers", "type": "Person"}],
     "roles": [{"nugget": "discovered", "argument": "security researchers", "role": "Attacker"}]},
]
for i in range(146):
    if rng.random() < 0.1:
        records.append({"text": "Officials declined to comment on the report published this week.",
                        "nuggets": [], "arguments": [], "roles": []})
        continue
    etype = rng.choice(sorted(EVENTS))
    phrases, arg_types = EVENTS[etype]
    nugget = rng.choice(phrases)
    args = []
    for t in rng.sample(arg_types, rng.randint(1, 3)):
        args.append({"surface": rng.choice(SURFACES[t]), "type": t})
    seen = set()
    args = [a for a in args if not (a["surface"] in seen or seen.add(a["surface"]))]
    text = " ".join([args[0]["surface"].capitalize(), nugget] + [a["surface"] for a in args[1:]]) + "."
    records.append({"doc": f"news{i:03d}", "text": text,
                    "nuggets": [{"surface": nugget, "type": etype}],
                    "arguments": args,
                    "roles": [{"nugget": nugget, "argument": a["surface"], "role": ROLE_OF[a["type"]]}
                              for a in args]})
write("casie.jsonl", "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records))

# ---------------------------------------------------------------- CVE impact (scored descriptions)
records = [
    {"text": "An issue was discovered in B&R Industrial Automation APROL before R4.2 V7.08. Some web scripts in "
             "the web interface allowed injection and execution of arbitrary unintended commands on the web "
             "server, a different vulnerability than CVE-2019-16364.", "score": 5.9},
    {"text": "Libspiro through 20190731 has a stack-based buffer overflow in the spiro_to_bpath0() function in "
             "spiro.c.", "score": 2.2},
]
for i in range(148):
    sw = rng.choice(["Apache Struts", "WordPress plugin Foo", "OpenSSL", "Cisco IOS", "Linux kernel", "libpng"])
    flaw = rng.choice(["a heap-based buffer overflow", "an SQL injection", "a cross-site scripting issue",
                       "an integer overflow", "a use-after-free", "an information disclosure"])
    impact = rng.choice([2.7, 2.9, 3.6, 4.2, 5.2, 5.9, 6.4])
    records.append({"text": f"{sw} before {rng.randint(1, 9)}.{rng.randint(0, 20)} has {flaw} that allows "
                            f"{rng.choice(['remote', 'local', 'authenticated'])} attackers to "
                            f"{rng.choice(['execute arbitrary code', 'read sensitive files', 'cause a crash'])}.",
                    "score": impact})
write("cve_impact.jsonl", "".join(json.dumps(r) + "\n" for r in records))
print(f"wrote fixtures to {OUT}")
