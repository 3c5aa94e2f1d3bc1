"""Walk a handful of raw postings through the ingestion filters.

The pipeline keeps postings that contain at least one search term, drops
those matching an exclusion term, removes retweets, and collapses
duplicates by normalized text.
"""

from tweetsift.corpus import (
    Tweet,
    default_filter_config,
    filter_pipeline,
    is_excluded,
    is_retweet,
    matches_keywords,
)

config = default_filter_config()
print(f"{len(config.keywords)} search terms, {len(config.exclusions)} exclusion terms")
print("first keywords:", ", ".join(config.keywords[:5]))
print()

postings = [
    Tweet("1", "I keep thinking he took his life because nobody listened"),
    Tweet("2", "Suicide Squad 2 trailer looks wild"),
    Tweet("3", "RT @news: local man died by suicide last night"),
    Tweet("4", "that merger was corporate suicide"),          # no exclusion, kept
    Tweet("5", "call the suicide prevention lifeline, you matter"),
    Tweet("6", "Call the suicide prevention lifeline, you MATTER"),  # dup of 5
    Tweet("7", "lovely weather in the park today"),
]

for tweet in postings:
    verdicts = []
    if not matches_keywords(tweet.text, config):
        verdicts.append("no keyword")
    if is_excluded(tweet.text, config):
        verdicts.append("excluded")
    if is_retweet(tweet):
        verdicts.append("retweet")
    print(f"  {tweet.id}: {tweet.text[:50]!r:55} {'/'.join(verdicts) or 'kept'}")

kept, stats = filter_pipeline(postings, config)
print()
print(f"input {stats.input} -> keywords {stats.after_keywords} "
      f"-> exclusions {stats.after_exclusions} -> retweets {stats.after_retweets} "
      f"-> dedupe {stats.after_dedupe}")
print("surviving ids:", [t.id for t in kept])
