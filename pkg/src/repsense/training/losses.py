import torch
import torch.nn.functional as F


def loss(
    pred_sim: torch.Tensor,
    label_sim: torch.Tensor,
    pred_class: torch.Tensor,
    label_class: torch.Tensor,
    alpha: float = 1.0,
    from_probs: bool = False,
) -> torch.Tensor:
    """
    Multi-task loss: (s - y)^2 + alpha * cross-entropy, averaged over the batch.

    pred_class holds logits, or probabilities when from_probs is set.
    With alpha == 0 the classification term is left out of the graph.
    """
    sim_term = torch.mean((pred_sim - label_sim) ** 2)
    if alpha == 0:
        return sim_term
    if from_probs:
        ce = F.nll_loss(torch.log(pred_class), label_class)
    else:
        ce = F.cross_entropy(pred_class, label_class)
    return sim_term + alpha * ce
