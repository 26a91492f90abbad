def set_scores(found, truth):
    """Precision, recall and F1 of ``found`` against ``truth``; F1 is 0 when nothing matches."""
    found, truth = set(found), set(truth)
    tp = len(found & truth)
    fp = len(found - truth)
    fn = len(truth - found)
    if tp == 0:
        return {"tp": tp, "fp": fp, "fn": fn, "precision": 0.0, "recall": 0.0, "f1": 0.0}
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    f1 = 2 * precision * recall / (precision + recall)
    return {"tp": tp, "fp": fp, "fn": fn, "precision": precision, "recall": recall, "f1": f1}


def f1_score(found, truth):
    return set_scores(found, truth)["f1"]
