from django.test import SimpleTestCase, override_settings

from verification.forms import IdealOptionsForm, VerifyOptionsForm


class VerifyOptionsFormTests(SimpleTestCase):

    def test_blank_uses_settings(self):
        form = VerifyOptionsForm({})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data, {'order': 'grevlex', 'bound': 3, 'seed': 0, 'xlsx': ''})

    @override_settings(VERIFIER={'DEFAULT_ORDER': 'lex', 'DEFAULT_BOUND': 5, 'DEFAULT_SEED': 7})
    def test_settings_override(self):
        form = VerifyOptionsForm({'seed': 0})
        self.assertTrue(form.is_valid())
        self.assertEqual((form.cleaned_data['order'], form.cleaned_data['bound'], form.cleaned_data['seed']),
                         ('lex', 5, 0))

    def test_invalid_values(self):
        for data in ({'order': 'revlex'}, {'bound': 0}, {'bound': 5}, {'seed': -1}, {'xlsx': 'out.csv'}):
            with self.subTest(data=data):
                form = VerifyOptionsForm(data)
                self.assertFalse(form.is_valid())
                self.assertIn(next(iter(data)), form.errors)


class IdealOptionsFormTests(SimpleTestCase):

    def test_defaults(self):
        form = IdealOptionsForm({})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['ring'].names, ('x1', 'x2', 'x3'))
        self.assertEqual(form.cleaned_data['engine'], 'auto')

    def test_custom_ring(self):
        form = IdealOptionsForm({'ring': "s, x, y, z'", 'engine': 'groebner'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['ring'].names, ('s', 'x', 'y', "z'"))

    def test_bad_rings(self):
        for ring in ('x1,sat', '1x', 'x1,,x2', 'x1,x1', 'x-1'):
            with self.subTest(ring=ring):
                self.assertFalse(IdealOptionsForm({'ring': ring}).is_valid())

    def test_bad_engine(self):
        self.assertFalse(IdealOptionsForm({'engine': 'magic'}).is_valid())
