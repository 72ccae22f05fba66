"""Backbone phase prediction network.

Three stages over the typed CNF graph: a message-passing stack whose layer
runs one isomorphism-style convolution per edge type (meta / positive /
negative) and sums them; attention blocks restricted to directly connected
node pairs (edge-linear memory, edge types folded into the scores); and
patch attention that splits each node embedding into patches and attends
within the node (node-linear memory). Attention blocks are "parallel" style:
one normalization feeds an FFN and the attention simultaneously, and both are
added to the residual stream. Transformer-internal FFNs have no hidden layer;
only the final classifier does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

from .graphio import EDGE_SELF, GraphData


@dataclass
class ModelConfig:
    hidden_dim: int = 64
    gnn_blocks: int = 4  # matches the encoded graphs' maximum diameter
    gsa_blocks: int = 3
    lsa_blocks: int = 3
    attention_heads: int = 4
    lsa_patches: int = 4
    classifier_hidden: int = 64

    def __post_init__(self) -> None:
        if min(self.gnn_blocks, self.gsa_blocks, self.lsa_blocks) < 1:
            raise ValueError("all block counts must be >= 1")
        if self.hidden_dim % self.attention_heads:
            raise ValueError("hidden_dim must be divisible by attention_heads")
        if self.hidden_dim % self.lsa_patches:
            raise ValueError("hidden_dim must be divisible by lsa_patches")
        if (self.hidden_dim // self.lsa_patches) % self.attention_heads:
            raise ValueError("patch size must be divisible by attention_heads")
        if self.classifier_hidden < 1:
            raise ValueError("classifier_hidden must be >= 1")


class _GinConv(nn.Module):
    """Sum-aggregation convolution for the edges of one type."""

    def __init__(self, dim: int):
        super().__init__()
        self.eps = nn.Parameter(torch.zeros(1))
        self.mlp = nn.Sequential(nn.Linear(dim, dim), nn.ReLU(), nn.Linear(dim, dim))

    def forward(self, x: torch.Tensor, src: torch.Tensor, dst: torch.Tensor) -> torch.Tensor:
        agg = torch.zeros_like(x)
        if src.numel():
            agg = agg.index_add(0, dst, x[src]).index_add(0, src, x[dst])
        return self.mlp((1.0 + self.eps) * x + agg)


class EdgeTypedGin(nn.Module):
    """One operator per edge type; node updates are the sum of the three."""

    def __init__(self, dim: int):
        super().__init__()
        self.convs = nn.ModuleList(_GinConv(dim) for _ in range(3))

    def forward(self, x: torch.Tensor, edges_by_type) -> torch.Tensor:
        out = None
        for conv, (src, dst) in zip(self.convs, edges_by_type):
            part = conv(x, src, dst)
            out = part if out is None else out + part
        return out


class GraphAttention(nn.Module):
    """Multi-head attention over connected node pairs only.

    Scores combine source, destination, and edge-type terms; every node also
    attends to itself through a learned self edge type, which keeps the
    softmax defined for isolated nodes. All intermediates are sized by the
    edge count, never nodes x nodes.
    """

    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = dim // heads
        self.proj = nn.Linear(dim, dim)
        self.edge_emb = nn.Embedding(4, dim)  # meta, positive, negative, self
        self.att_src = nn.Parameter(torch.empty(heads, self.head_dim))
        self.att_dst = nn.Parameter(torch.empty(heads, self.head_dim))
        self.att_edge = nn.Parameter(torch.empty(heads, self.head_dim))
        for p in (self.att_src, self.att_dst, self.att_edge):
            nn.init.xavier_uniform_(p)

    def forward(
        self, x: torch.Tensor, src: torch.Tensor, dst: torch.Tensor, etype: torch.Tensor
    ) -> torch.Tensor:
        n = x.shape[0]
        h = self.proj(x).view(n, self.heads, self.head_dim)
        e = self.edge_emb(etype).view(-1, self.heads, self.head_dim).to(h.dtype)
        score = (
            (h[src] * self.att_src).sum(-1)
            + (h[dst] * self.att_dst).sum(-1)
            + (e * self.att_edge).sum(-1)
        )
        score = nn.functional.leaky_relu(score, 0.2)
        dst_cols = dst.unsqueeze(1).expand_as(score)
        peak = score.new_full((n, self.heads), float("-inf"))
        peak = peak.scatter_reduce(0, dst_cols, score, reduce="amax", include_self=True).detach()
        weight = torch.exp(score - peak[dst])
        denom = weight.new_zeros((n, self.heads)).index_add(0, dst, weight)
        alpha = weight / denom[dst]
        out = h.new_zeros((n, self.heads, self.head_dim))
        out = out.index_add(0, dst, alpha.unsqueeze(-1) * h[src])
        return out.reshape(n, -1)


class PatchAttention(nn.Module):
    """Attention among the patches of a single node embedding."""

    def __init__(self, dim: int, patches: int, heads: int):
        super().__init__()
        self.patches = patches
        self.heads = heads
        patch_dim = dim // patches
        self.head_dim = patch_dim // heads
        self.q = nn.Linear(patch_dim, patch_dim)
        self.k = nn.Linear(patch_dim, patch_dim)
        self.v = nn.Linear(patch_dim, patch_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        n = x.shape[0]
        p = x.view(n, self.patches, -1)

        def split(t: torch.Tensor) -> torch.Tensor:
            return t.view(n, self.patches, self.heads, self.head_dim).transpose(1, 2)

        q, k, v = split(self.q(p)), split(self.k(p)), split(self.v(p))
        scores = q @ k.transpose(-1, -2) / math.sqrt(self.head_dim)
        out = torch.softmax(scores, dim=-1) @ v  # [n, heads, patches, head_dim]
        return out.transpose(1, 2).reshape(n, -1)


class _GnnBlock(nn.Module):
    def __init__(self, dim: int):
        super().__init__()
        self.norm = nn.LayerNorm(dim)
        self.gin = EdgeTypedGin(dim)

    def forward(self, x: torch.Tensor, edges_by_type) -> torch.Tensor:
        return x + self.gin(self.norm(x), edges_by_type)


class _ParallelBlock(nn.Module):
    """norm -> (FFN with no hidden layer) + attention, added to the residual."""

    def __init__(self, dim: int, attention: nn.Module):
        super().__init__()
        self.norm = nn.LayerNorm(dim)
        self.ffn = nn.Linear(dim, dim)
        self.attention = attention

    def forward(self, x: torch.Tensor, *attn_args) -> torch.Tensor:
        h = self.norm(x)
        return x + self.ffn(h) + self.attention(h, *attn_args)


class BackboneNet(nn.Module):
    """Full network: type scalar in, one phase-1 logit per node out."""

    def __init__(self, config: ModelConfig | None = None):
        super().__init__()
        self.config = config or ModelConfig()
        cfg = self.config
        dim = cfg.hidden_dim
        self.input_proj = nn.Linear(1, dim)
        self.gnn = nn.ModuleList(_GnnBlock(dim) for _ in range(cfg.gnn_blocks))
        self.gsa = nn.ModuleList(
            _ParallelBlock(dim, GraphAttention(dim, cfg.attention_heads))
            for _ in range(cfg.gsa_blocks)
        )
        self.lsa = nn.ModuleList(
            _ParallelBlock(dim, PatchAttention(dim, cfg.lsa_patches, cfg.attention_heads))
            for _ in range(cfg.lsa_blocks)
        )
        self.head = nn.Sequential(
            nn.Linear(dim, cfg.classifier_hidden),
            nn.ReLU(),
            nn.Linear(cfg.classifier_hidden, 1),
        )

    @staticmethod
    def _expand_edges(graph: GraphData):
        """Per-type single-direction pairs for the convs; bidirected edges
        plus typed self-loops for attention."""
        by_type = []
        for t in range(3):
            mask = graph.edge_types == t
            by_type.append((graph.edge_index[0][mask], graph.edge_index[1][mask]))
        n = graph.num_nodes
        loop = torch.arange(n)
        src = torch.cat([graph.edge_index[0], graph.edge_index[1], loop])
        dst = torch.cat([graph.edge_index[1], graph.edge_index[0], loop])
        etype = torch.cat(
            [graph.edge_types, graph.edge_types, torch.full((n,), EDGE_SELF, dtype=torch.long)]
        )
        return by_type, (src, dst, etype)

    def forward(self, graph: GraphData) -> torch.Tensor:
        by_type, (src, dst, etype) = self._expand_edges(graph)
        x = self.input_proj(graph.node_types.to(self.input_proj.weight.dtype))
        for block in self.gnn:
            x = block(x, by_type)
        for block in self.gsa:
            x = block(x, src, dst, etype)
        for block in self.lsa:
            x = block(x)
        return self.head(x).squeeze(-1)

    def variable_logits(self, graph: GraphData) -> torch.Tensor:
        return self.forward(graph)[graph.var_nodes]

    @torch.no_grad()
    def variable_probs(self, graph: GraphData) -> torch.Tensor:
        """One phase-1 probability per variable node, in variable order."""
        was_training = self.training
        self.eval()
        try:
            return torch.sigmoid(self.variable_logits(graph))
        finally:
            self.train(was_training)


def phase_and_confidence(prob: float) -> tuple[int, float]:
    """Probability >= 0.5 rounds to phase 1; confidence is the winning mass."""
    phase = 1 if prob >= 0.5 else 0
    return phase, max(prob, 1.0 - prob)
