#!/usr/bin/env python3
"""Generate data/lexicon.tsv (surface, lemma, pos) from compact word lists.

Regular inflections are derived here so the C++ tagger only needs table
lookups plus a few suffix fallbacks. Entry order per surface form is the
tagger's preference order.
"""
import pathlib
import sys

# Verbs. A trailing "+" marks final-consonant doubling (plug -> plugged).
VERBS = """
accept access accelerate add adjust admit+ advance agree align allow analyze announce answer apply approach
arrange arrive ask assemble assign attach attempt avoid back bake balance book boil borrow brake breathe
broadcast browse brush buckle calculate call cancel charge chat+ check chop+ choose clean clear click climb close
collect combine commit+ compare compile complete compute concentrate configure confirm connect consider contact
contain continue control+ convert cook copy correct count cover crack create cross crouch cry cut+ dance debug
decide declare decrypt define delete deliver deploy describe design detach detect determine dial dice
disable disconnect discuss dispose distribute divide document download drag+ drain dress drift drop+ dry dump
edit elect email empty enable encrypt end enjoy ensure enter establish estimate evaluate examine exchange exit
expand expect explain explore export extend face fasten fetch file fill filter finish fix flip+ flush fold follow
format gather generate glance grab+ greet grip+ guide halt hand handle heat help hire hop+ hug+ hurry identify
ignore import improve include indicate inform initialize input insert inspect install instruct insure invite
iron join jump keep kick knock label land launch lay lift like limit line link list listen load locate lock log+
look lower maintain manage mark match measure melt mention merge message migrate mix monitor mop+ mount move
navigate need note notice notify obey observe obtain occur+ offer open operate order organize output pack
paint park participate pass paste pause peel perform permit+ phone pick pin+ place plan+ plant play plug+ point
polish post pour practice prefer+ prepare press prevent print proceed process program protect provide pull
pump punch push qualify queue raise reach react read receive recharge recommend reconnect reconstruct record
recover recycle reduce refer+ refill refine register reinstall release reload remain remember remind remove
rename repair repeat replace reply report request require research reserve reset+ resolve respond rest restart
restore resume retrieve return review revise reward rinse roll rotate run+ save scan+ schedule score scroll
search secure select send separate serve set+ settle shake share shave shift ship+ shop+ show shower shut+
sign signal sip+ skip+ slice slide slow smell smile sort speak spell spin+ split+ spray spread squeeze stack
start state stay steer step+ stir+ stop+ store stretch study submit+ subscribe substitute suggest supply
support switch tap+ taste test text thank tighten tilt time tip+ toggle touch track trade transfer+ translate
travel treat trim+ try turn type unbuckle unlock unpack unplug+ unscrew untie update upload use validate vary
verify view visit wait walk want warm wash watch water wave weigh welcome wipe withdraw work wrap+ yield zip+
reboot power cool dim+ brighten assess document ring arrive dispatch escalate purchase compost greet wander
inquire interview apply approve authorize authenticate backup bookmark calibrate capture clamp close deposit
empty enroll evacuate exhale inhale fry grill grind fasten knead lather measure microwave moisten preheat
rebuild reinforce relax reposition resubmit scrub season sharpen simmer sprinkle steam strain sweep tape tie
unfold unwrap vacuum whisk wring
""".split()

# Irregular verbs: base, past, participle (third person and -ing stay regular
# unless listed in IRREGULAR_FORMS).
IRREGULAR = """
go went gone
come came come
make made made
get got gotten
read read read
take took taken
see saw seen
find found found
leave left left
hold held held
keep kept kept
put put put
cut cut cut
set set set
let let let
shut shut shut
run ran run
sit sat sat
stand stood stood
say said said
tell told told
buy bought bought
bring brought brought
think thought thought
pay paid paid
lay laid laid
send sent sent
spend spent spent
build built built
drive drove driven
ride rode ridden
write wrote written
eat ate eaten
drink drank drunk
wake woke woken
wear wore worn
choose chose chosen
give gave given
know knew known
begin began begun
break broke broken
speak spoke spoken
fall fell fallen
sleep slept slept
meet met met
feel felt felt
hear heard heard
broadcast broadcast broadcast
feed fed fed
lead led led
light lit lit
hang hung hung
stick stuck stuck
dig dug dug
win won won
lose lost lost
throw threw thrown
draw drew drawn
show showed shown
grow grew grown
blow blew blown
fly flew flown
forget forgot forgotten
understand understood understood
rise rose risen
shake shook shaken
hide hid hidden
bite bit bitten
bend bent bent
catch caught caught
teach taught taught
seek sought sought
sell sold sold
sweep swept swept
mean meant meant
lend lent lent
shoot shot shot
withdraw withdrew withdrawn
spin spun spun
split split split
spread spread spread
swim swam swum
sing sang sung
ring rang rung
undo undid undone
rebuild rebuilt rebuilt
reset reset reset
upset upset upset
""".strip().splitlines()

# Nouns with regular plurals.
NOUNS = """
acquaintance account action address adult alarm answer app appointment area arm arrow assistant attachment
bag ball bank basket bathroom battery bed bell belt bike bill bin bird blanket block board boat body bolt
book bottle bottom bowl box brake bread breakfast bridge browser brush bucket budget bug building bulb bus
button cabinet cable cake calendar call camera can cap car card carpet case cash cat cell chair channel charger
chart check cheese chicken child cipher ciphertext circle city class clinic clock cloth code coffee coin
color computer condition connection connectivity contact container cord corner counter country cover crossing
crosswalk cup curb customer cycle dashboard data database date day deadline deal dentist departure desk
destination device direction dish dishwasher display distance doctor document dog door doorbell drawer
drink driver drop edge egg email emergency end engine entrance envelope error event exit eye face family
fan faucet fee field file filter finger fire floor flower folder food foot form friend fruit fuel function
game garage garden gas gate glass glove goal grass ground group guest hair hall hand handle hat head
heater helmet hill hole home hook hospital hotel hour house ice icon id idea indicator information input
insurance internet issue item jacket jar job key keyboard kitchen knife label lamp lane laptop lawn leg
letter level lid light line link list lock log loop machine mail manual map market meal menu message meter
method microwave minute mirror mode modem moment money monitor month mop morning motor mouse mug name
network night node noise note notification number nurse object office oil oven owner package page pan
panel paper parameter parent park part party password path patient payment pedestrian pen pencil person
phone photo piece pin pipe place plan plant plate platform plug pocket point pole policy port post pot
power prescription price printer problem procedure process product program protocol provider pump purse
queue rack radio rain receipt recipe recommendation record reference region reminder report request
requirement reservation result review road robot rock roof room root rope route router rule sale salt
sample schedule school screen screw seat second secret section seed sensor sequence server service session
setting shape share sheet shelf shirt shoe shop side sign signal sink site size skin slot smartphone sock
software solution sound source space speaker speed spoon spot stair standard start state station status step
stick stone stop store storm stove street string student subject sugar suit supplier surface switch
system table tablet tank tap task tea team temperature terminal test text thing ticket time timer tire
toilet token tool tooth top towel tower town toy track traffic train trash tray tree trip truck tube turn
type umbrella unit update user value van vehicle verification version video view visitor voice wall
wallet washer watch water way website week weight wheel window wire word worker yard year zone trail
agreement assignment bracket ceiling counterpart credential crossroad curtain drone fork gear highway
intersection junction kettle ladder mattress napkin outlet pillow ramp remote sidewalk socket stool
suitcase thermostat toothbrush toothpaste vest whistle
""".split()

IRREGULAR_NOUNS = """
child children
person people
foot feet
tooth teeth
man men
woman women
mouse mice
knife knives
shelf shelves
leaf leaves
life lives
wife wives
half halves
datum data
""".strip().splitlines()

# Mass or plural-only nouns, no plural generated.
MASS_NOUNS = """
advice equipment furniture homework luggage news software traffic information feedback research
connectivity evidence knowledge money music rice water
""".split()

ADJECTIVES = """
able active available bad basic big black blue bright broken busy careful central clean clear close cold
complete correct current dark dental digital dirty dry easy electric empty entire extra fast final fine
first free fresh front full general good great green hard heavy high hot important large last late
left light little long loud low main major manual minor new next nice normal old online open orange other
patient personal physical possible previous private proper public quick quiet random ready real red right
safe same second secure separate short simple slow small soft special specific stable strong sure third
top total true upper usual valid warm weak wet white whole wide wrong yellow encrypted in-network
necessary nearby opposite remaining several various own certain different entire main local
""".split()

ADVERBS = """
again also always away carefully completely correctly down else even ever finally first forward gently
here immediately just later never now off often once only out quickly really securely slowly soon still
then there together too up very well already instead back approximately briefly firmly properly safely
thoroughly tightly
""".split()

DETERMINERS = "a an the this that these those each every all both some any another either neither my your his her its our their no".split()
PRONOUNS = "i you he she it we they them him us me who which what whom whose myself yourself itself themselves someone something everyone everything anyone anything".split()
PREPOSITIONS = """
about above across after against along among around at before behind below beneath beside between beyond
by down during except for from in inside into near of off on onto out outside over past per since through
throughout to toward towards under underneath until up upon via with within without
""".split()
CONJUNCTIONS = "and or but nor so because if unless while when whenever whether than though although once until".split()
AUXILIARIES = """
be be
is be
are be
was be
were be
been be
being be
am be
have have
has have
had have
having have
do do
does do
did do
done do
can can
could could
will will
would would
shall shall
should should
may may
might might
must must
""".strip().splitlines()
NUMBERS = """
one 1
two 2
three 3
four 4
five 5
six 6
seven 7
eight 8
nine 9
ten 10
fifteen 15
twenty 20
thirty 30
""".strip().splitlines()

# Units reduce to a short canonical lemma.
UNITS = """
minute min
minutes min
min min
mins min
second sec
seconds sec
sec sec
secs sec
hour hour
hours hour
""".strip().splitlines()

# Extra ambiguous or idiomatic surface forms, listed in preference order.
EXTRA = """
left left N
right right N
right right ADJ
wait wait V
output output V
output output N
secret secret ADJ
secret secret N
secret secret V
sharing share N
sharing share V
crossing crossing N
crossing cross V
light light N
light light ADJ
online online ADJ
online online ADV
local local N
green green ADJ
green green N
power power N
power power V
search search V
search search N
review review N
review review V
face face V
face face N
back back ADV
cannot can AUX
""".strip().splitlines()

VOWELS = set("aeiou")


def third_person(v):
    if v.endswith(("s", "sh", "ch", "x", "z", "o")):
        return v + "es"
    if v.endswith("y") and v[-2] not in VOWELS:
        return v[:-1] + "ies"
    return v + "s"


def past(v, double):
    if double:
        return v + v[-1] + "ed"
    if v.endswith("e"):
        return v + "d"
    if v.endswith("y") and v[-2] not in VOWELS:
        return v[:-1] + "ied"
    return v + "ed"


def gerund(v, double):
    if double:
        return v + v[-1] + "ing"
    if v.endswith("ie"):
        return v[:-2] + "ying"
    if v.endswith("e") and not v.endswith(("ee", "ye", "oe")):
        return v[:-1] + "ing"
    return v + "ing"


def plural(n):
    if n.endswith(("s", "sh", "ch", "x", "z")):
        return n + "es"
    if n.endswith("y") and n[-2] not in VOWELS:
        return n[:-1] + "ies"
    return n + "s"


def main(out_path):
    entries = []
    seen = set()

    def add(surface, lemma, pos):
        key = (surface, lemma, pos)
        if key not in seen:
            seen.add(key)
            entries.append(key)

    for line in EXTRA:
        add(*line.split())
    for line in AUXILIARIES:
        s, l = line.split()
        add(s, l, "AUX")
    for line in NUMBERS:
        s, l = line.split()
        add(s, l, "NUM")
    for line in UNITS:
        s, l = line.split()
        add(s, l, "N")
    for w in DETERMINERS:
        add(w, w, "DET")
    for w in PRONOUNS:
        add(w, w, "PRON")
    for w in CONJUNCTIONS:
        add(w, w, "CONJ")
    for w in PREPOSITIONS:
        add(w, w, "PREP")

    irregular = {}
    for line in IRREGULAR:
        base, p, pp = line.split()
        irregular[base] = (p, pp)
    verbs = []
    for raw in VERBS:
        double = raw.endswith("+")
        verbs.append((raw.rstrip("+"), double))
    for base in irregular:
        if base not in {v for v, _ in verbs}:
            verbs.append((base, base.endswith(("run", "set", "cut", "put", "let", "shut", "dig", "win", "spin", "split", "swim", "sit", "begin", "upset", "reset"))))

    nouns = set(NOUNS) | set(MASS_NOUNS)
    adjectives = set(ADJECTIVES)

    for base, double in verbs:
        add(base, base, "V")
        add(third_person(base), base, "V")
        if base in irregular:
            p, pp = irregular[base]
            add(p, base, "V")
            add(pp, base, "V")
        else:
            add(past(base, double), base, "V")
        add(gerund(base, double), base, "V")

    irregular_plural = {}
    for line in IRREGULAR_NOUNS:
        s, p = line.split()
        irregular_plural[s] = p
    for n in sorted(nouns):
        add(n, n, "N")
        if n in MASS_NOUNS:
            continue
        add(irregular_plural.get(n, plural(n)), n, "N")
    for s, p in irregular_plural.items():
        add(p, s, "N")
    for a in sorted(adjectives):
        add(a, a, "ADJ")
    for a in ADVERBS:
        add(a, a, "ADV")

    # A word that is both noun and verb keeps noun-first order only when EXTRA says so;
    # otherwise the tagger decides from context.
    entries.sort(key=lambda e: e[0])
    ordered = {}
    for s, l, p in entries:
        ordered.setdefault(s, []).append((l, p))
    extra_first = {}
    for line in EXTRA:
        s, l, p = line.split()
        extra_first.setdefault(s, []).append((l, p))

    lines = ["# surface\tlemma\tpos  (generated by tools/gen_lexicon.py)"]
    for s in sorted(ordered):
        items = extra_first.get(s, [])
        rest = [x for x in ordered[s] if x not in items]
        for l, p in items + rest:
            lines.append(f"{s}\t{l}\t{p}")
    pathlib.Path(out_path).write_text("\n".join(lines) + "\n")
    print(f"{len(lines) - 1} entries written to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/lexicon.tsv")
