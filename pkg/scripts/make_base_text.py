"""Regenerate tests/fixtures/base_text.txt, the seed text for synthetic fixtures.

Sentences are drawn from a small bank (rich in contractible, reducible and
AAE-testable sites) with seeded shuffling until the text passes 2400 tokens.
"""
import random
import sys
from pathlib import Path

BANK = [
    "well um my grandmother is from the south side and she will tell you everything",
    "we are going to the store later because the kids want to see the parade",
    "honestly uh the neighborhood was different back then and nobody locked doors",
    "they have been working on that bridge forever and it is still not finished",
    "i do not think anybody ever really knew what happened that summer",
    "those boys were always playing ball outside until the streetlights came on",
    "you know she does not like when people talk about her garden",
    "so um basically we got to leave early tomorrow morning for the reunion",
    "he is trying to get a job downtown but the bus is always late",
    "my brother did not want to move but the rent was getting crazy",
    "um yeah the church had a picnic every year and everybody came",
    "i will tell you one thing that man could not cook",
    "they are kind of strict about the rules over there",
    "she was going to call me but her phone is broken",
    "we did not have anything like that when i was coming up",
    "uh those teachers were tough but they cared about us",
    "it is funny how things change when you get older",
    "my cousin is real quiet but he will surprise you",
    "you have to give me a minute to remember that story",
    "i was not trying to start trouble with anybody",
    "honestly um the music was loud every weekend on our block",
    "he does not ever come around here anymore",
    "we are sort of tired of hearing about the new highway",
    "they will probably tear down the old theater next year",
    "let me tell you about the time we drove to memphis",
    "the kids are outside and the food is ready",
    "she has not seen them since the wedding",
    "uh my father was a mechanic and my mother was a nurse",
    "i have never seen snow like that before",
    "we could not afford much but we had fun",
    "basically um everybody on the street knew each other",
    "you will need a coat because it is cold outside",
    "they were trying to fix the roof before the storm",
    "he is going to graduate in the spring",
    "she does not want anything fancy for her birthday",
    "the pastor was preaching for two hours that sunday",
    "i will never forget the smell of that bakery",
    "we have got to keep the tradition going",
    "um the corner store is closed now",
    "my sister is a teacher and she loves it",
    "those were the days when a soda cost a dime",
    "he will be home around six tonight",
    "they do not make cars like that anymore",
    "she is the smartest person in our family",
    "uh we were living on the east side then",
    "you are going to love this recipe",
    "i did not know anything about college back then",
    "the band was practicing every afternoon in the basement",
    "we will see what happens with the election",
    "honestly uh my uncle is a character for real",
    "it was raining the whole weekend of the festival",
    "they have a big house near the river",
    "he was not ready for the test",
    "um my friends are coming over later",
    "she will bring the potato salad like always",
    "we do not talk about that argument anymore",
    "the library is where i spent most summers",
    "you have been here longer than me",
    "i am trying to save money for a car",
    "those kids were running around the yard all day",
]


def main(out: Path, seed: int = 20231) -> None:
    rng = random.Random(seed)
    lines, n = [], 0
    while n < 2400:
        order = BANK[:]
        rng.shuffle(order)
        for s in order:
            speaker = "SPK1" if len(lines) % 3 else "SPK2"
            lines.append(f"{speaker}:\t{s.capitalize()}.")
            n += len(s.split())
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({n} tokens)")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/fixtures/base_text.txt"))
