import re

from django import forms
from django.conf import settings

from algebra.exceptions import AlgebraError
from algebra.ideal_expr_parser import Engine
from algebra.poly_core import MonomialOrder, VarSet

ORDER_CHOICES = [
    (MonomialOrder.Kind.GREVLEX.value, MonomialOrder.Kind.GREVLEX.label),
    (MonomialOrder.Kind.LEX.value, MonomialOrder.Kind.LEX.label),
]


def _verifier_default(key: str, fallback):
    return getattr(settings, 'VERIFIER', {}).get(key, fallback)


class VerifyOptionsForm(forms.Form):
    """Options of `manage.py verify`; blanks fall back to settings.VERIFIER."""
    order = forms.ChoiceField(choices=ORDER_CHOICES, required=False, label="Monomial order")
    bound = forms.IntegerField(min_value=1, max_value=4, required=False, label="Effective-zero search bound")
    seed = forms.IntegerField(min_value=0, required=False, label="Random seed")
    xlsx = forms.CharField(required=False, label="Excel export path")

    def clean_order(self):
        return self.cleaned_data.get('order') or _verifier_default('DEFAULT_ORDER', MonomialOrder.Kind.GREVLEX.value)

    def clean_bound(self):
        bound = self.cleaned_data.get('bound')
        return _verifier_default('DEFAULT_BOUND', 3) if bound is None else bound

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return _verifier_default('DEFAULT_SEED', 0) if seed is None else seed

    def clean_xlsx(self):
        path = self.cleaned_data.get('xlsx') or ''
        if path and not path.endswith('.xlsx'):
            raise forms.ValidationError("Only .xlsx files are allowed.")
        return path


class IdealOptionsForm(forms.Form):
    """Options of `manage.py ideal`."""
    ring = forms.CharField(required=False, label="Variables (comma separated)")
    engine = forms.ChoiceField(choices=Engine.choices, required=False, label="Engine")

    DEFAULT_RING = 'x1,x2,x3'
    NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

    def clean_ring(self):
        names = self.cleaned_data.get('ring') or self.DEFAULT_RING
        for name in (n.strip() for n in names.split(',')):
            if not self.NAME_PATTERN.match(name) or name == 'sat':
                raise forms.ValidationError(f"{name!r} is not a usable variable name.")
        try:
            return VarSet.of(names)
        except AlgebraError as e:
            raise forms.ValidationError(str(e))

    def clean_engine(self):
        return self.cleaned_data.get('engine') or Engine.AUTO.value
