#!/usr/bin/env python3
"""Regenerate the bundled scenario catalog, motion labels, replica scenes and
the prompt checksum manifest.

Output is deterministic; rerun after editing the tables below and commit the
files under assets/.
"""
import hashlib
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "assets"

# Dynamic object classes used by pick-and-place tasks, with their category.
PICK_CLASSES = {
    "mug": "dining ware", "towel": "bathroom accessory", "book": "decor",
    "plate": "dining ware", "fork": "dining ware", "pillow": "decor",
    "remote": "electronics", "dumbbell": "gym equipment", "sponge": "kitchen ware",
    "vase": "decor", "bowl": "dining ware", "kettle": "kitchen ware", "toy": "toy",
    "laptop": "electronics", "basket": "decor", "plant": "plant",
    "bottle": "liquid container", "shoe": "apparel", "cup": "dining ware",
    "brush": "bathroom accessory", "spoon": "dining ware", "candle": "decor",
    "jar": "kitchen ware", "bag": "apparel",
}
# Static placement targets.
PLACE_CLASSES = {
    "table": "support furniture", "counter": "support furniture",
    "sofa": "seating furniture", "bed": "sleeping furniture",
    "shelf": "storage furniture", "desk": "support furniture",
    "sink": "kitchen bathroom fixture", "rug": "floor covering",
    "cabinet": "storage furniture", "stand": "support furniture",
    "chair": "seating furniture", "bench": "seating furniture",
}
# Hand-held items offered during free-form motion tasks.
INHAND = [
    "towel", "dumbbell", "book", "mug", "remote", "sponge", "tablet", "headphones",
    "notebook", "pen", "brush", "comb", "toothbrush", "blanket", "pillow", "glass",
    "teapot", "magazine", "guitar", "paintbrush", "scissors", "tape", "duster",
    "spray", "broom", "ladle", "whisk", "candle", "lotion", "earbuds", "yarn",
    "needle", "stapler", "calculator", "envelope", "camera", "racket", "ball",
    "rope", "mat",
]
MOTIONS = [
    "stretch", "squat", "lunge", "sit", "kneel", "lean", "crouch", "reach up",
    "bend over", "walk slowly", "pace", "sway", "wave", "clap", "tiptoe",
    "shuffle", "hop", "march in place", "twist torso", "roll shoulders",
    "lie down", "recline", "rock back and forth", "point", "nod", "shrug",
    "balance on one leg", "side step", "jog in place", "turn around", "bow",
    "rest chin on hand", "cross arms", "stand still", "pivot", "kneel and reach",
    "sit cross legged", "step back", "lean forward", "arch back", "rotate wrists",
    "swing arms", "pick up from floor", "carry with both hands", "push forward",
    "pull toward body", "wipe in circles", "scrub back and forth", "stir",
    "pour carefully", "fold", "sweep", "dab", "type", "flip pages", "strum",
    "sip", "toss gently", "hang up", "arrange",
]

PERSONAS = [
    {
        "id": "p1",
        "name": "Early athlete",
        "short_profile": "I wake up before sunrise to train. I coach a youth soccer team. "
                         "I cook high protein meals and keep a strict schedule.",
        "extended_profile": "I am a physical therapist who starts every day before sunrise with "
                            "a workout. I coach a youth soccer team on weekends and follow a "
                            "strict schedule at home. I prepare high protein meals, track my "
                            "recovery closely, and unwind in the evening with sports highlights "
                            "before an early bedtime.",
        "big5": {"openness": 3.0, "conscientiousness": 4.5, "extroversion": 4.0,
                 "agreeableness": 3.5, "neuroticism": 2.0},
    },
    {
        "id": "p2",
        "name": "Creative homebody",
        "short_profile": "I am a freelance illustrator who works from home. I love jazz "
                         "records, pottery and long baths. I host friends for dinner.",
        "extended_profile": "I am a freelance illustrator and spend most days at home. Mornings "
                            "begin slowly with coffee and a novel. I paint, play piano, and make "
                            "pottery when inspiration strikes. I collect jazz records, host small "
                            "dinners for friends, and end the day with a film and a long bath.",
        "big5": {"openness": 5.0, "conscientiousness": 2.5, "extroversion": 3.0,
                 "agreeableness": 4.0, "neuroticism": 3.5},
    },
    {
        "id": "p3",
        "name": "Early cleaner",
        "short_profile": "I am a retired accountant. I start each morning cleaning the "
                         "kitchen. I keep a tidy house and plan my budget weekly.",
        "extended_profile": "I am a retired accountant who likes order. Every morning I clean "
                            "the kitchen and bathroom before anything else. I organize closets "
                            "and shelves, restock the pantry, prepare simple meals, and sort "
                            "the recycling. In the evening I review bills and plan the budget.",
        "big5": {"openness": 2.0, "conscientiousness": 5.0, "extroversion": 2.0,
                 "agreeableness": 3.0, "neuroticism": 3.0},
    },
]

# Per persona and hour: context word and the two activity words sharing it.
CONTEXT = [
    ["sunrise", "breakfast", "gym", "gear", "lunch", "garage",
     "recovery", "mealprep", "evening", "dinner", "sports", "bedtime"],
    ["coffee", "reading", "music", "art", "pasta", "nap",
     "craft", "records", "hosting", "film", "journal", "bath"],
    ["kitchen", "bathroom", "closet", "floor", "sandwich", "shelves",
     "bedroom", "pantry", "tableware", "dishes", "trash", "budget"],
]
ACTIVITY = [
    [("jog", "yoga"), ("eggs", "smoothie"), ("weights", "cycling"), ("cleaning", "laundry"),
     ("salad", "wrap"), ("repair", "polish"), ("stretching", "foamroll"), ("boxes", "sorting"),
     ("run", "jumprope"), ("fish", "chicken"), ("highlights", "magazine"), ("sleep", "meditation")],
    [("brew", "tea"), ("novel", "poetry"), ("piano", "guitar"), ("painting", "sketching"),
     ("cooking", "soup"), ("sleep", "daydream"), ("pottery", "knitting"), ("jazz", "podcast"),
     ("wine", "candlelight"), ("classics", "documentary"), ("writing", "letters"),
     ("bubbles", "aroma")],
    [("scrub", "windows"), ("scrub", "mirror"), ("organize", "declutter"),
     ("vacuum", "shampoo"), ("quick", "leftovers"), ("dust", "labels"), ("tidy", "linens"),
     ("restock", "fridge"), ("setting", "folding"), ("wash", "oven"), ("sort", "compost"),
     ("plan", "bills")],
]
# Off-routine alternatives: own context word per persona and hour.
ALT_CONTEXT = [
    "hobby", "errand", "visit", "fixup", "garden", "puzzle", "charity", "study",
    "phone", "party", "pet", "calendar", "birthday", "neighbor", "plumbing", "seedlings",
    "chess", "donation", "language", "video", "celebration", "aquarium", "travel", "crossword",
    "scrapbook", "volunteer", "tutoring", "recipe", "karaoke", "bird", "stamps", "origami",
    "model", "genealogy", "telescope", "houseplants",
]
ALT_ACTIVITY = ["afternoon", "mail", "guest", "faucet", "weeding", "jigsaw", "donate",
                "course", "call", "balloons", "fishtank", "schedule"]


def h(s):
    return int(hashlib.sha256(s.encode()).hexdigest()[:12], 16)


def title(ctx, act):
    return f"{ctx.capitalize()} {act}"


def build_catalog():
    pick_names = list(PICK_CLASSES)
    place_names = list(PLACE_CLASSES)
    used_first_t1 = set()
    used_first_t2 = set()

    def fresh_pair(tag, used, universe_a, universe_b):
        x = h(tag)
        for k in range(len(universe_a) * len(universe_b)):
            a = universe_a[(x + k) % len(universe_a)]
            b = universe_b[((x >> 7) + 3 * k) % len(universe_b)]
            if (a, b) not in used:
                used.add((a, b))
                return a, b
        raise RuntimeError("ran out of unique pairs")

    def theme(ctx, act, first_t1, first_t2):
        label = f"{ctx} {act}"
        t1 = [{"pick": first_t1[0], "place": first_t1[1],
               "thought": f"Move the {first_t1[0]} to the {first_t1[1]} for {ctx}."}]
        seen = {tuple(first_t1)}
        k = 0
        while len(t1) < 3:
            y = h(label + str(k))
            k += 1
            pair = (pick_names[y % len(pick_names)], place_names[(y >> 5) % len(place_names)])
            if pair in seen:
                continue
            seen.add(pair)
            t1.append({"pick": pair[0], "place": pair[1],
                       "thought": f"Move the {pair[0]} to the {pair[1]} for {label}."})
        motion0, static0 = first_t2
        items = []
        k = 0
        while len(items) < 5:
            y = h(label + "inhand" + str(k))
            k += 1
            it = INHAND[y % len(INHAND)]
            if it not in items:
                items.append(it)
        t2 = [{"motion": motion0, "static": static0, "inhand": items[0],
               "thought": f"{motion0.capitalize()} near the {static0} holding a {items[0]} for {ctx}."}]
        for i in range(1, 5):
            y = h(label + "motion" + str(i))
            m = MOTIONS[y % len(MOTIONS)]
            s = place_names[(y >> 9) % len(place_names)]
            t2.append({"motion": m, "static": s, "inhand": items[i],
                       "thought": f"{m.capitalize()} near the {s} holding a {items[i]} for {label}."})
        return {"intention": title(ctx, act), "context": ctx, "type1": t1, "type2": t2}

    families = []
    for p in range(3):
        for hour in range(12):
            ctx = CONTEXT[p][hour]
            base_act, look_act = ACTIVITY[p][hour]
            alt_ctx = ALT_CONTEXT[12 * p + hour]
            alt_act = ALT_ACTIVITY[(hour + 7 * p) % 12]
            f1 = fresh_pair(f"t1{ctx}", used_first_t1, pick_names, place_names)
            f2 = fresh_pair(f"t2{ctx}", used_first_t2, MOTIONS, place_names)
            d1 = fresh_pair(f"t1{alt_ctx}", used_first_t1, pick_names, place_names)
            d2 = fresh_pair(f"t2{alt_ctx}", used_first_t2, MOTIONS, place_names)
            families.append({
                "persona": PERSONAS[p]["id"],
                "hour": hour,
                "base": theme(ctx, base_act, f1, f2),
                "lookalike": theme(ctx, look_act, f1, f2),
                "distinct": theme(alt_ctx, alt_act, d1, d2),
            })
    return {
        "version": 1,
        "epsilon": 0.2,
        "personas": PERSONAS,
        "pick_classes": PICK_CLASSES,
        "place_classes": PLACE_CLASSES,
        "inhand_items": INHAND,
        "families": families,
    }


ROOMS = ["living room", "kitchen", "dining room", "main bedroom", "bathroom", "office",
         "guest bedroom", "hallway", "laundry room", "home gym", "garage"]

ADJ = ["Oak", "Walnut", "Ceramic", "Linen", "Steel", "Glass", "Velvet", "Bamboo", "Marble",
       "Rustic", "Modern", "Compact", "Vintage", "Woven", "Matte", "Copper", "Birch", "Slate"]
EXTRA_STATIC = [
    ("Wall Mirror", "mirror"), ("Window Curtain", "curtain"), ("Ceiling Light", "lighting"),
    ("Floor Lamp", "lighting"), ("Wardrobe", "storage furniture"), ("Dresser", "storage furniture"),
    ("Bookshelf", "storage furniture"), ("Armchair", "seating furniture"),
    ("Ottoman", "seating furniture"), ("Refrigerator", "large kitchen appliance"),
    ("Oven Range", "large kitchen appliance"), ("Washing Machine", "large appliance"),
    ("Toilet", "bathroom fixtures"), ("Bathtub", "bathroom fixtures"),
    ("Shower Stall", "bathroom fixtures"), ("Radiator", "heating cooling"),
    ("Ceiling Fan", "heating cooling"), ("Microwave", "medium kitchen appliance"),
    ("Television", "display"), ("Monitor", "display"), ("Archway", "arch"),
    ("Toaster", "small kitchen appliance"), ("Blender", "small kitchen appliance"),
    ("Bicycle", "vehicle"), ("Nightstand", "support furniture"), ("Coffee Maker", "small kitchen appliance"),
    ("Doormat", "floor covering"), ("Crib", "sleeping furniture"),
]
EXTRA_DYNAMIC = [
    ("Picture Frame", "decor"), ("Figurine", "decor"), ("Wool Scarf", "apparel"),
    ("Sun Hat", "wearable"), ("Wristwatch", "wearable"), ("Tissue Box", "bathroom accessory"),
    ("Soap Dish", "bathroom accessory"), ("Serving Tray", "tray"), ("Waste Bin", "trashcan"),
    ("Teddy Bear", "toy"), ("Hamster", "animate object"), ("Cutting Board", "kitchen ware"),
    ("Water Pitcher", "liquid container"), ("Phone Charger", "electronics"), ("Yoga Block", "gym equipment"),
    ("Kettlebell", "gym equipment"), ("Mantel Clock", "decor"), ("Coaster Set", "dining ware"),
]
# Dynamic-category objects that rest on a support and are therefore static.
SUPPORTED = [("Wall Clock", "decor"), ("Mounted Speaker", "electronics"),
             ("Hanging Planter", "plant")]


def check_name(name, cls, all_classes):
    words = name.lower().split()
    hits = [c for c in all_classes if c in words]
    expected = [cls] if cls else []
    if sorted(hits) != sorted(expected):
        raise RuntimeError(f"name {name!r} mentions classes {hits}, expected {expected}")


def build_scene(index, n_rooms, n_static, n_dynamic):
    rng = random.Random(1000 + index)
    rooms = ROOMS[:n_rooms]
    all_classes = list(PICK_CLASSES) + list(PLACE_CLASSES)
    objects = []
    next_id = 100 + 7 * index

    def add(name, category, cls, room, supported):
        nonlocal next_id
        check_name(name, cls if cls in all_classes else None, all_classes)
        obj = {"id": next_id, "name": name, "category": category, "room": room,
               "supported": supported}
        if cls:
            obj["class"] = cls
        objects.append(obj)
        next_id += rng.randint(1, 4)

    statics = []
    for cls, cat in PLACE_CLASSES.items():
        statics.append((f"{rng.choice(ADJ)} {cls.capitalize()}", cat, cls))
    while len(statics) < n_static - len(SUPPORTED):
        if rng.random() < 0.5:
            cls, cat = rng.choice(list(PLACE_CLASSES.items()))
            statics.append((f"{rng.choice(ADJ)} {cls.capitalize()}", cat, cls))
        else:
            name, cat = rng.choice(EXTRA_STATIC)
            statics.append((f"{rng.choice(ADJ)} {name}", cat, None))
    dynamics = []
    for cls, cat in PICK_CLASSES.items():
        dynamics.append((f"{rng.choice(ADJ)} {cls.capitalize()}", cat, cls))
    while len(dynamics) < n_dynamic:
        if rng.random() < 0.4:
            cls, cat = rng.choice(list(PICK_CLASSES.items()))
            dynamics.append((f"{rng.choice(ADJ)} {cls.capitalize()}", cat, cls))
        else:
            name, cat = rng.choice(EXTRA_DYNAMIC)
            dynamics.append((f"{rng.choice(ADJ)} {name}", cat, None))
    pool = [(n, c, k, False) for n, c, k in statics + dynamics]
    pool += [(f"{rng.choice(ADJ)} {n}", c, None, True) for n, c in SUPPORTED]
    rng.shuffle(pool)
    for name, cat, cls, supported in pool:
        add(name, cat, cls, rng.choice(rooms), supported)
    scene = {"version": 1, "name": f"replica_{index + 1}", "rooms": rooms, "objects": objects}
    n_s = sum(1 for o in objects if o["supported"] or o["category"] not in DYNAMIC_CATS)
    n_d = len(objects) - n_s
    assert 4 <= len(rooms) <= 11 and 51 <= n_s <= 140 and 33 <= n_d <= 94, (n_s, n_d)
    return scene


DYNAMIC_CATS = {"trashcan", "decor", "dining ware", "plant", "electronics", "animate object",
                "apparel", "liquid container", "kitchen ware", "tray", "bathroom accessory",
                "gym equipment", "toy", "wearable"}


def main():
    (ROOT / "scenario").mkdir(parents=True, exist_ok=True)
    (ROOT / "scenes").mkdir(parents=True, exist_ok=True)
    catalog = build_catalog()
    (ROOT / "scenario" / "catalog.json").write_text(json.dumps(catalog, indent=1) + "\n")
    (ROOT / "motions.txt").write_text("\n".join(MOTIONS) + "\n")
    manifest = {}
    for f in sorted((ROOT / "prompts").glob("*.txt")):
        manifest[f.stem] = hashlib.sha256(f.read_bytes()).hexdigest()
    (ROOT / "prompts" / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    sizes = [(5, 56, 36), (7, 74, 45), (4, 54, 34), (9, 96, 60), (11, 128, 80)]
    for i, (r, s, d) in enumerate(sizes):
        scene = build_scene(i, r, s, d)
        (ROOT / "scenes" / f"{scene['name']}.json").write_text(json.dumps(scene, indent=1) + "\n")


if __name__ == "__main__":
    main()
